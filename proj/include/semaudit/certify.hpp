#ifndef SEMAUDIT_CERTIFY_HPP_
#define SEMAUDIT_CERTIFY_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "semaudit/catalog.hpp"
#include "semaudit/metric.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

// Coverage of every audited-harmful class. α_c is the class's largest
// detector score; the global value is the minimum over harmful classes and is
// left empty when there are none.
struct CoverageProfile {
  std::vector<std::string> class_ids;
  std::vector<Rational> alpha;
  std::optional<Rational> global_alpha;
  Rational eta_detect;
  std::vector<std::string> flagged_below;  // α_c < eta_detect
  std::vector<std::string> zero_coverage;  // α_c = 0
};

CoverageProfile coverage(const Catalog& catalog, const Rational& eta_detect);

// Published per-class floor P_c of a score function over harmful classes:
// the smallest value the metric assigns inside the class.
std::vector<std::pair<std::string, Rational>> class_floor_profile(const Catalog& catalog,
                                                                  const ScoreFunction& score);

class UncertifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Certificate {
  ScoreKind metric = ScoreKind::kEnvelope;
  Rational gamma;    // multiplier 1/ε
  Rational beta;     // additive slack
  Rational epsilon;  // strictness, min harmful P_c
  std::vector<std::pair<std::string, Rational>> profile;
  Rational budget;       // τ
  Rational raw_ceiling;  // τ·γ + β before clipping
  Rational ceiling;      // min(1, raw_ceiling)
  bool useful = false;   // τ/ε + β < 1
};

// Envelope-backed certificate H*(x) <= M_Env(x)/α̂ + η̄.
// Throws UncertifiableError when α̂ is undefined or zero.
Certificate make_certificate(const CoverageProfile& profile, const Rational& tau, const Rational& eta_bar);

// ε-strict class-coverage certificate for any metric, using the metric's
// own class floors. Throws UncertifiableError when ε is zero or undefined.
Certificate strict_certificate(const Catalog& catalog, const ScoreFunction& score, const Rational& tau,
                               const Rational& beta);

// H*(x) − (γ·M(x) + β). A positive value is a violation witness.
template <typename Scalar>
Scalar check_certificate(const Catalog& catalog, const ScoreFunction& score, const Certificate& cert,
                         const Vector<Scalar>& x) {
  detail::check_domain(catalog, x);
  const Scalar harm = x.dot(scalar_cast<Scalar>(catalog.latent_harm()));
  return harm - (evaluate(score, x) * scalar_cast<Scalar>(cert.gamma) + scalar_cast<Scalar>(cert.beta));
}

struct CeilingGrid {
  Rational tau;
  std::vector<Rational> alphas;
  std::vector<Rational> etas;
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> ceiling;  // rows: alphas, cols: etas
  // Smallest α̂ strictly above which the ceiling drops below 1, per η̄;
  // empty when η̄ >= 1.
  std::vector<std::optional<Rational>> boundary;
};

Rational certified_ceiling(const Rational& tau, const Rational& alpha, const Rational& eta);

CeilingGrid ceiling_sweep(const Rational& tau, const std::vector<Rational>& alphas,
                          const std::vector<Rational>& etas);

// One-sided Clopper–Pearson upper bound on a Bernoulli rate after `errors`
// failures in `trials` draws, at confidence 1 − delta.
double clopper_pearson_upper(long errors, long trials, double delta);

struct SlackBounds {
  Rational eta_expected;               // max_c ε_c
  double eta_high_probability = 0.0;   // max_c upper bound at level 1 − δ
  std::map<std::string, double> per_class_upper;
};

// Expected and high-probability disagreement slack from per-class error
// rates. The observed error count for class c is ceil(ε_c·n_c). Throws
// std::invalid_argument when a class with ε_c > 0 has no sample size.
SlackBounds expected_and_hp_slack(const std::map<std::string, Rational>& eps, double delta,
                                  const std::map<std::string, long>& sample_sizes);

}  // namespace semaudit

#endif  // SEMAUDIT_CERTIFY_HPP_
