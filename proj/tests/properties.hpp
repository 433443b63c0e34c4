#ifndef SEMAUDIT_TESTS_PROPERTIES_HPP_
#define SEMAUDIT_TESTS_PROPERTIES_HPP_

#include <random>
#include <string>
#include <vector>

#include "semaudit/best_response.hpp"
#include "semaudit/certify.hpp"
#include "semaudit/metric.hpp"
#include "semaudit/protocol.hpp"
#include "test_util.hpp"

namespace semaudit::testing {

struct PropertyReport {
  std::string name;
  long cases = 0;
  long skipped = 0;
  long violations = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (violations++ == 0) first_failure = what;
  }
  bool ok() const { return violations == 0 && cases > 0; }
};

// Σ_{v∈c} x_v·Env(v) = α_c·mass(c) for every class, plus the global
// certificate H(x) <= M_Env(x)/α̂ on harm-pure catalogs.
inline std::vector<PropertyReport> envelope_and_certificate_suite(int pairs, std::uint64_t seed) {
  PropertyReport equality{"classwise envelope equality"};
  PropertyReport certificate{"global certificate H <= M_Env/alpha"};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const Catalog cat = random_catalog(rng, {1, 10});
    const Strategy x = random_strategy(rng, cat.size());
    const RationalVector env = envelope_lift(cat).values;
    const RationalVector mass = class_mass(cat, x);
    ++equality.cases;
    for (Eigen::Index c = 0; c < cat.num_classes(); ++c) {
      Rational lifted = 0, alpha = 0;
      for (Eigen::Index v : cat.members(c)) {
        lifted += x[v] * env[v];
        alpha = std::max(alpha, cat.variants()[v].score);
      }
      if (lifted != alpha * mass[c]) equality.fail("pair " + std::to_string(i) + " class " + cat.classes()[c].id);
    }
    const auto alpha = coverage(cat, 0).global_alpha;
    if (!alpha || *alpha == 0) {
      ++certificate.skipped;
      continue;
    }
    ++certificate.cases;
    const Rational harm = *exposure_report(cat, x).ideal_harm;
    if (harm > x.dot(env) / *alpha) certificate.fail("pair " + std::to_string(i));
  }
  return {equality, certificate};
}

// H*(x) <= Ĥ(x) + Δ(x) and H*(x) <= M_Env(x)/α̂ + Δ(x) on catalogs whose
// variants disagree with their class labels.
inline PropertyReport disagreement_suite(int pairs, std::uint64_t seed) {
  PropertyReport out{"disagreement slack H* <= M_Env/alpha + Delta"};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const Catalog cat = random_catalog(rng, {1, 10, false, 0.35});
    const Strategy x = random_strategy(rng, cat.size());
    const auto r = exposure_report(cat, x);
    ++out.cases;
    if (r.true_harm > r.audited_harm + r.disagreement_mass) out.fail("pair " + std::to_string(i) + " (audited)");
    const auto alpha = coverage(cat, 0).global_alpha;
    if (!alpha || *alpha == 0) continue;
    if (r.true_harm > evaluate(envelope_lift(cat), x) / *alpha + r.disagreement_mass) {
      out.fail("pair " + std::to_string(i) + " (certificate)");
    }
  }
  return out;
}

// Random classwise-constant functions; every conservative one must sit on
// or above the envelope. Counts only conservative samples as cases.
inline PropertyReport envelope_minimality_suite(int conservative_samples, std::uint64_t seed) {
  PropertyReport out{"envelope pointwise minimality"};
  std::mt19937_64 rng(seed);
  while (out.cases < conservative_samples) {
    const Catalog cat = random_catalog(rng, {1, 8});
    const RationalVector m = cat.scores();
    const RationalVector env = envelope_lift(cat).values;
    RationalVector g(cat.size());
    for (Eigen::Index c = 0; c < cat.num_classes(); ++c) {
      // Somewhere between the class's smallest score and 1.
      Rational lo = 1;
      for (Eigen::Index v : cat.members(c)) lo = std::min(lo, m[v]);
      const Rational value = lo + (1 - lo) * draw_unit(rng);
      for (Eigen::Index v : cat.members(c)) g[v] = value;
    }
    if (!(g.array() >= m.array()).all()) {
      ++out.skipped;
      continue;
    }
    ++out.cases;
    if (!(g.array() >= env.array()).all()) out.fail("sample " + std::to_string(out.cases));
  }
  return out;
}

// Exact best response against a dense double grid at step 1/k.
inline PropertyReport lp_grid_suite(int instances, long k, std::uint64_t seed) {
  PropertyReport out{"best response vs dense grid"};
  std::mt19937_64 rng(seed);
  while (out.cases < instances) {
    const Catalog cat = random_catalog(rng, {1, 4});
    const Rational tau = draw_unit(rng);
    const BudgetedLP lp = make_lp(cat, ScoreKind::kFragile, tau);
    const auto br = solve(cat, lp);
    std::vector<double> m, u;
    for (const Variant& v : cat.variants()) {
      m.push_back(to_double(v.score));
      u.push_back(to_double(v.utility));
    }
    const auto grid = lp_grid_oracle(m, u, to_double(tau), k);
    ++out.cases;
    if (br.has_value() != grid.has_value()) {
      out.fail("feasibility mismatch at instance " + std::to_string(out.cases));
      continue;
    }
    if (!br) continue;
    const double exact = to_double(br->utility);
    const double spread = *std::max_element(u.begin(), u.end()) - *std::min_element(u.begin(), u.end());
    if (*grid > exact + 1e-12 || exact - *grid > spread / static_cast<double>(k) + 1e-12) {
      out.fail("instance " + std::to_string(out.cases) + ": exact " + std::to_string(exact) + " grid " +
               std::to_string(*grid));
    }
  }
  return out;
}

// Raising ρ refines the induced partition and lowers the envelope pointwise.
inline PropertyReport refinement_suite(int pairs, std::uint64_t seed) {
  PropertyReport out{"refinement monotonicity"};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const Catalog base = random_catalog(rng, {2, 9});
    std::vector<std::string> ids;
    for (const Variant& v : base.variants()) ids.push_back(v.id);
    std::vector<Edge> edges;
    const long count = draw_int(rng, 0, 2 * static_cast<long>(ids.size()));
    for (long e = 0; e < count; ++e) {
      edges.push_back({ids[static_cast<std::size_t>(draw_int(rng, 0, base.size() - 1))],
                       ids[static_cast<std::size_t>(draw_int(rng, 0, base.size() - 1))], draw_int(rng, 0, 5) > 0,
                       draw_unit(rng)});
    }
    Rational lo = draw_unit(rng), hi = draw_unit(rng);
    if (lo > hi) std::swap(lo, hi);
    const Partition coarse = induce_partition({edges, lo}, ids);
    const Partition fine = induce_partition({edges, hi}, ids);
    ++out.cases;
    if (!refines(fine, coarse)) {
      out.fail("pair " + std::to_string(i) + ": partition does not refine");
      continue;
    }
    const RationalVector env_coarse = envelope_lift(apply_partition(base, coarse).catalog).values;
    const RationalVector env_fine = envelope_lift(apply_partition(base, fine).catalog).values;
    if (!(env_fine.array() <= env_coarse.array()).all()) out.fail("pair " + std::to_string(i) + ": envelope rose");
  }
  return out;
}

inline std::vector<PropertyReport> all_property_suites() {
  std::vector<PropertyReport> out = envelope_and_certificate_suite(10'000, 101);
  out.push_back(disagreement_suite(10'000, 102));
  out.push_back(envelope_minimality_suite(1'000, 103));
  out.push_back(lp_grid_suite(100, 200, 104));
  out.push_back(refinement_suite(1'000, 105));
  return out;
}

}  // namespace semaudit::testing

#endif  // SEMAUDIT_TESTS_PROPERTIES_HPP_
