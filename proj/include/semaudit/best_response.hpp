#ifndef SEMAUDIT_BEST_RESPONSE_HPP_
#define SEMAUDIT_BEST_RESPONSE_HPP_

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/metric.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

// max U(x) s.t. M(x) <= budget over the probability simplex.
struct BudgetedLP {
  ScoreFunction scores;
  RationalVector utilities;
  Rational budget;
};

BudgetedLP make_lp(const Catalog& catalog, ScoreKind kind, const Rational& budget);

template <typename Scalar>
struct BestResponse {
  Vector<Scalar> strategy;
  Scalar utility;
  Scalar measured;
  ExposureReport<Scalar> report;
  std::vector<std::string> support;  // at most two variant ids, catalog order
  int tied_candidates = 0;           // other candidates with the same utility
};

namespace detail {

template <typename Scalar>
struct Candidate {
  Eigen::Index a = -1;
  Eigen::Index b = -1;  // -1 for a point mass
  Scalar weight_a;      // mass on a; b receives the rest
  Scalar utility;
  Scalar harm;
};

// Lexicographic preference: more utility, then less harm, then the smaller
// support in catalog order.
template <typename Scalar>
bool preferred(const Candidate<Scalar>& lhs, const Candidate<Scalar>& rhs) {
  if (lhs.utility != rhs.utility) return lhs.utility > rhs.utility;
  if (lhs.harm != rhs.harm) return lhs.harm < rhs.harm;
  auto key = [](const Candidate<Scalar>& c) {
    const Eigen::Index lo = c.b < 0 ? c.a : std::min(c.a, c.b);
    const Eigen::Index hi = c.b < 0 ? -1 : std::max(c.a, c.b);
    return std::pair{lo, hi};
  };
  return key(lhs) < key(rhs);
}

}  // namespace detail

// Exact optimum by enumerating basic feasible solutions. With one budget row
// on top of the simplex every vertex has at most two nonzero coordinates:
// either a feasible point mass, or a two-variant mixture sitting exactly on
// the budget with one score below and one above it. Returns nothing when
// every score exceeds the budget.
template <typename Scalar = Rational>
std::optional<BestResponse<Scalar>> solve(const Catalog& catalog, const BudgetedLP& lp) {
  const Eigen::Index n = catalog.size();
  if (lp.scores.values.size() != n || lp.utilities.size() != n) {
    throw std::invalid_argument("LP data does not match the catalog");
  }
  if (lp.budget < 0) throw std::invalid_argument("audit budget must be nonnegative");

  const Vector<Scalar> m = scalar_cast<Scalar>(lp.scores.values);
  const Vector<Scalar> u = scalar_cast<Scalar>(lp.utilities);
  const Vector<Scalar> h = scalar_cast<Scalar>(catalog.latent_harm());
  const Scalar tau = scalar_cast<Scalar>(lp.budget);

  std::optional<detail::Candidate<Scalar>> best;
  std::vector<Scalar> utilities_seen;
  auto offer = [&](const detail::Candidate<Scalar>& c) {
    utilities_seen.push_back(c.utility);
    if (!best || detail::preferred(c, *best)) best = c;
  };

  for (Eigen::Index a = 0; a < n; ++a) {
    if (m[a] <= tau) offer({a, -1, Scalar(1), u[a], h[a]});
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      Eigen::Index lo = a, hi = b;
      if (m[lo] > m[hi]) std::swap(lo, hi);
      if (!(m[lo] < tau && tau < m[hi])) continue;
      const Scalar w = (m[hi] - tau) / (m[hi] - m[lo]);
      const Scalar rest = Scalar(1) - w;
      offer({lo, hi, w, w * u[lo] + rest * u[hi], w * h[lo] + rest * h[hi]});
    }
  }
  if (!best) return std::nullopt;

  Vector<Scalar> x = Vector<Scalar>::Constant(n, Scalar(0));
  x[best->a] = best->weight_a;
  std::vector<Eigen::Index> support{best->a};
  if (best->b >= 0) {
    x[best->b] = Scalar(1) - best->weight_a;
    support.push_back(best->b);
  }
  std::sort(support.begin(), support.end());

  BestResponse<Scalar> out{x, x.dot(u), x.dot(m), exposure_report(catalog, x), {}, 0};
  for (Eigen::Index i : support) out.support.push_back(catalog.variants()[i].id);
  out.tied_candidates = static_cast<int>(
      std::count(utilities_seen.begin(), utilities_seen.end(), best->utility)) - 1;
  return out;
}

template <typename Scalar>
struct TrajectoryPoint {
  Rational tau;
  std::optional<BestResponse<Scalar>> response;  // empty when infeasible
};

// Best responses along ascending budgets.
template <typename Scalar = Rational>
std::vector<TrajectoryPoint<Scalar>> trajectory(const Catalog& catalog, const ScoreFunction& score,
                                                const std::vector<Rational>& taus) {
  if (!std::is_sorted(taus.begin(), taus.end())) throw std::invalid_argument("budgets must be ascending");
  std::vector<TrajectoryPoint<Scalar>> out;
  for (const Rational& tau : taus) {
    out.push_back({tau, solve<Scalar>(catalog, BudgetedLP{score, catalog.utilities(), tau})});
  }
  return out;
}

}  // namespace semaudit

#endif  // SEMAUDIT_BEST_RESPONSE_HPP_
