#include "semaudit/mdp.hpp"

#include <array>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace semaudit {

std::string_view to_string(VariantChoice choice) {
  return choice == VariantChoice::kOriginal ? "orig" : "manip";
}

void validate_mdp(const AuditMdp& mdp) {
  if (mdp.metric == ScoreKind::kClassMean) throw std::invalid_argument("MDP metric must be fragile or envelope");
  if (mdp.grid_denominator < 1) throw std::invalid_argument("MDP grid needs at least two points");
  for (const Rational* c : {&mdp.benign_cost, &mdp.orig_cost, &mdp.manip_cost, &mdp.envelope_cost}) {
    if (*c < 0 || *c > 1) throw std::invalid_argument("MDP costs must lie in [0,1]");
  }
  if (mdp.budget < 0) throw std::invalid_argument("MDP budget must be nonnegative");
  if (mdp.rounds != 3) throw std::invalid_argument("the audit MDP has exactly three rounds");
}

namespace {

Rational cost_of(const AuditMdp& mdp, ScoreKind metric, VariantChoice variant) {
  if (metric == ScoreKind::kEnvelope) return mdp.envelope_cost;
  return variant == VariantChoice::kOriginal ? mdp.orig_cost : mdp.manip_cost;
}

bool passes(const AuditMdp& mdp, ScoreKind metric, VariantChoice variant, long mh) {
  const Rational m(mh, mdp.grid_denominator);
  return m * cost_of(mdp, metric, variant) + (1 - m) * mdp.benign_cost <= mdp.budget;
}

constexpr std::array<ScoreKind, 2> kMetrics{ScoreKind::kFragile, ScoreKind::kEnvelope};
constexpr std::array<VariantChoice, 2> kVariants{VariantChoice::kOriginal, VariantChoice::kManipulated};

std::string metric_tag(ScoreKind metric) { return metric == ScoreKind::kFragile ? "frag" : "env"; }

}  // namespace

Rational variant_cost(const AuditMdp& mdp) { return cost_of(mdp, mdp.metric, mdp.variant); }

Rational solve_mdp(const AuditMdp& mdp) {
  validate_mdp(mdp);
  Rational best = 0;
  for (long i = 0; i <= mdp.grid_denominator; ++i) {
    if (passes(mdp, mdp.metric, mdp.variant, i)) best = std::max(best, Rational(i, mdp.grid_denominator));
  }
  return best;
}

std::string reward_name(ScoreKind metric, VariantChoice variant) {
  return "harm_" + metric_tag(metric) + "_" + std::string(to_string(variant));
}

MdpExploration explore_mdp(const AuditMdp& mdp) {
  validate_mdp(mdp);
  // State (round, harmful mass index, variant, metric); successors follow the
  // emitted model command for command.
  using State = std::tuple<int, long, int, int>;
  struct Move {
    State to;
    int metric = -1;  // set on the metric-choice moves, which carry rewards
  };
  auto moves = [&](const State& s) {
    const auto [r, mh, v, met] = s;
    std::vector<Move> out;
    if (r == 0) {
      for (long i = 0; i <= mdp.grid_denominator; ++i) out.push_back({{1, i, v, met}});
    } else if (r == 1) {
      for (int nv = 0; nv < 2; ++nv) out.push_back({{2, mh, nv, met}});
    } else if (r == 2) {
      for (int nm = 0; nm < 2; ++nm) out.push_back({{3, mh, v, nm}, nm});
    } else {
      out.push_back({s});
    }
    return out;
  };

  std::map<State, std::vector<Move>> graph;
  std::queue<State> frontier;
  frontier.push({0, 0, 0, 0});
  graph[{0, 0, 0, 0}];
  MdpExploration out;
  while (!frontier.empty()) {
    const State s = frontier.front();
    frontier.pop();
    auto succ = moves(s);
    out.transitions += static_cast<long>(succ.size());
    for (const Move& m : succ) {
      if (graph.emplace(m.to, std::vector<Move>{}).second) frontier.push(m.to);
    }
    graph[s] = std::move(succ);
  }
  out.states = static_cast<long>(graph.size());

  // Every path is acyclic until the absorbing final round, so values follow
  // by induction from round 3 down to round 0.
  for (ScoreKind metric : kMetrics) {
    for (VariantChoice variant : kVariants) {
      const int metric_index = metric == ScoreKind::kFragile ? 0 : 1;
      const int variant_index = variant == VariantChoice::kOriginal ? 0 : 1;
      std::map<State, Rational> value;
      for (int r = 3; r >= 0; --r) {
        for (const auto& [s, succ] : graph) {
          if (std::get<0>(s) != r) continue;
          if (r == 3) {
            value[s] = 0;
            continue;
          }
          Rational best;
          bool first = true;
          for (const Move& m : succ) {
            Rational gain = value.at(m.to);
            const auto [sr, mh, v, met] = s;
            if (m.metric == metric_index && v == variant_index && passes(mdp, metric, variant, mh)) {
              gain += Rational(mh, mdp.grid_denominator);
            }
            if (first || gain > best) best = gain;
            first = false;
          }
          value[s] = best;
        }
      }
      out.values[reward_name(metric, variant)] = value.at({0, 0, 0, 0});
    }
  }
  return out;
}

PrismArtifact emit_prism(const AuditMdp& mdp) {
  validate_mdp(mdp);
  const long k = mdp.grid_denominator;
  // Common denominator so the audit check compares integers.
  Integer scale = 1;
  for (const Rational* c : {&mdp.benign_cost, &mdp.orig_cost, &mdp.manip_cost, &mdp.envelope_cost, &mdp.budget}) {
    scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(*c));
  }
  auto scaled = [&](const Rational& c) { return Integer(boost::multiprecision::numerator(c * Rational(scale))).str(); };

  std::ostringstream m;
  m << "// Three-round audit: harmful mass, variant, metric.\n"
    << "// Costs are scaled by " << scale.str() << " so the audit check stays integral.\n"
    << "mdp\n\n"
    << "const int K = " << k << ";\n"
    << "const int BENIGN = " << scaled(mdp.benign_cost) << ";\n"
    << "const int ORIG = " << scaled(mdp.orig_cost) << ";\n"
    << "const int MANIP = " << scaled(mdp.manip_cost) << ";\n"
    << "const int ENV = " << scaled(mdp.envelope_cost) << ";\n"
    << "const int BUDGET = " << scaled(mdp.budget) << ";\n\n";
  for (ScoreKind metric : kMetrics) {
    for (VariantChoice variant : kVariants) {
      const std::string cost = metric == ScoreKind::kEnvelope ? "ENV"
                               : variant == VariantChoice::kOriginal ? "ORIG"
                                                                     : "MANIP";
      m << "formula pass_" << metric_tag(metric) << "_" << to_string(variant) << " = mh*" << cost
        << " + (K-mh)*BENIGN <= BUDGET*K;\n";
    }
  }
  m << "\nmodule audit\n"
    << "  r : [0..3] init 0;\n"
    << "  mh : [0..K] init 0;\n"
    << "  v : [0..1] init 0;\n"
    << "  met : [0..1] init 0;\n\n";
  for (long i = 0; i <= k; ++i) m << "  [alloc" << i << "] r=0 -> (r'=1) & (mh'=" << i << ");\n";
  m << "  [orig] r=1 -> (r'=2) & (v'=0);\n"
    << "  [manip] r=1 -> (r'=2) & (v'=1);\n"
    << "  [frag] r=2 -> (r'=3) & (met'=0);\n"
    << "  [env] r=2 -> (r'=3) & (met'=1);\n"
    << "  [] r=3 -> true;\n"
    << "endmodule\n\n"
    << "label \"done\" = r=3;\n";
  for (ScoreKind metric : kMetrics) {
    for (VariantChoice variant : kVariants) {
      const std::string tag = metric_tag(metric) + "_" + std::string(to_string(variant));
      m << "\nrewards \"" << reward_name(metric, variant) << "\"\n"
        << "  [" << metric_tag(metric) << "] v=" << (variant == VariantChoice::kOriginal ? 0 : 1) << " & pass_" << tag
        << " : mh/K;\n"
        << "endrewards\n";
    }
  }

  std::ostringstream p;
  for (ScoreKind metric : kMetrics) {
    for (VariantChoice variant : kVariants) {
      p << "R{\"" << reward_name(metric, variant) << "\"}max=? [ F \"done\" ]\n";
    }
  }
  return {m.str(), p.str()};
}

}  // namespace semaudit
