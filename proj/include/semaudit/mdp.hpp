#ifndef SEMAUDIT_MDP_HPP_
#define SEMAUDIT_MDP_HPP_

#include <map>
#include <string>

#include "semaudit/metric.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

enum class VariantChoice { kOriginal, kManipulated };

std::string_view to_string(VariantChoice choice);

// Sequential audit: the platform picks the harmful mass on a grid, then the
// variant of the harmful class, then the auditor's metric is applied. The
// harm m_H is collected once, when the audit passes.
struct AuditMdp {
  ScoreKind metric = ScoreKind::kFragile;  // fragile or envelope
  VariantChoice variant = VariantChoice::kOriginal;
  long grid_denominator = 20;  // masses i/grid_denominator
  Rational benign_cost{1, 10};
  Rational orig_cost{9, 10};
  Rational manip_cost{1, 10};
  Rational envelope_cost{9, 10};
  Rational budget{1, 5};
  int rounds = 3;
};

// Throws std::invalid_argument on costs outside [0,1], a negative budget or
// a metric other than fragile/envelope.
void validate_mdp(const AuditMdp& mdp);

// Cost the auditor charges the harmful class under the configured metric.
Rational variant_cost(const AuditMdp& mdp);

// Largest grid mass m with m·variant_cost + (1 − m)·benign_cost <= budget,
// or 0 when no grid mass passes.
Rational solve_mdp(const AuditMdp& mdp);

struct MdpExploration {
  long states = 0;
  long transitions = 0;
  // Maximal expected reward per reward structure, keyed "harm_<metric>_<variant>".
  std::map<std::string, Rational> values;
};

// Builds the reachable state graph of the emitted model explicitly and runs
// backward induction for each of the four reward structures.
MdpExploration explore_mdp(const AuditMdp& mdp);

std::string reward_name(ScoreKind metric, VariantChoice variant);

struct PrismArtifact {
  std::string model;
  std::string properties;
};

// PRISM-language MDP and its four reachability-reward queries. The metric and
// variant of `mdp` are left to the model's nondeterminism.
PrismArtifact emit_prism(const AuditMdp& mdp);

}  // namespace semaudit

#endif  // SEMAUDIT_MDP_HPP_
