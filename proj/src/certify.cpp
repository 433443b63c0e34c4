#include "semaudit/certify.hpp"

#include <algorithm>

#include <boost/math/special_functions/beta.hpp>

namespace semaudit {

CoverageProfile coverage(const Catalog& catalog, const Rational& eta_detect) {
  require_valid(catalog);
  CoverageProfile out;
  out.eta_detect = eta_detect;
  const RationalVector alpha = classwise_max(catalog, catalog.scores());
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    const SemanticClass& cls = catalog.classes()[c];
    if (cls.audited_label != 1) continue;
    const Rational a = alpha[catalog.members(c).front()];
    out.class_ids.push_back(cls.id);
    out.alpha.push_back(a);
    if (a < eta_detect) out.flagged_below.push_back(cls.id);
    if (a == 0) out.zero_coverage.push_back(cls.id);
    if (!out.global_alpha || a < *out.global_alpha) out.global_alpha = a;
  }
  return out;
}

std::vector<std::pair<std::string, Rational>> class_floor_profile(const Catalog& catalog,
                                                                  const ScoreFunction& score) {
  require_valid(catalog);
  const RationalVector floor = classwise_min(catalog, score.values);
  std::vector<std::pair<std::string, Rational>> out;
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    if (catalog.classes()[c].audited_label != 1) continue;
    out.emplace_back(catalog.classes()[c].id, floor[catalog.members(c).front()]);
  }
  return out;
}

namespace {

Certificate finish(ScoreKind metric, std::vector<std::pair<std::string, Rational>> profile,
                   const Rational& tau, const Rational& beta) {
  if (profile.empty()) throw UncertifiableError("no harmful classes: coverage is undefined");
  Rational epsilon = profile.front().second;
  for (const auto& [id, p] : profile) epsilon = std::min(epsilon, p);
  if (epsilon <= 0) {
    throw UncertifiableError("a harmful class has zero coverage; no metric-level certificate exists");
  }
  Certificate cert;
  cert.metric = metric;
  cert.epsilon = epsilon;
  cert.gamma = 1 / epsilon;
  cert.beta = beta;
  cert.profile = std::move(profile);
  cert.budget = tau;
  cert.raw_ceiling = tau * cert.gamma + beta;
  cert.ceiling = std::min(Rational(1), cert.raw_ceiling);
  cert.useful = cert.raw_ceiling < 1;
  return cert;
}

}  // namespace

Certificate make_certificate(const CoverageProfile& profile, const Rational& tau, const Rational& eta_bar) {
  if (!profile.global_alpha) throw UncertifiableError("no harmful classes: coverage is undefined");
  std::vector<std::pair<std::string, Rational>> p;
  for (std::size_t i = 0; i < profile.class_ids.size(); ++i) p.emplace_back(profile.class_ids[i], profile.alpha[i]);
  // A bare published coverage level with no per-class breakdown.
  if (p.empty()) p.emplace_back("global", *profile.global_alpha);
  return finish(ScoreKind::kEnvelope, std::move(p), tau, eta_bar);
}

Certificate strict_certificate(const Catalog& catalog, const ScoreFunction& score, const Rational& tau,
                               const Rational& beta) {
  return finish(score.kind, class_floor_profile(catalog, score), tau, beta);
}

Rational certified_ceiling(const Rational& tau, const Rational& alpha, const Rational& eta) {
  if (alpha <= 0) throw UncertifiableError("coverage must be positive");
  return std::min(Rational(1), tau / alpha + eta);
}

CeilingGrid ceiling_sweep(const Rational& tau, const std::vector<Rational>& alphas,
                          const std::vector<Rational>& etas) {
  CeilingGrid grid;
  grid.tau = tau;
  grid.alphas = alphas;
  grid.etas = etas;
  grid.ceiling.resize(static_cast<Eigen::Index>(alphas.size()), static_cast<Eigen::Index>(etas.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] <= 0 || alphas[i] > 1) throw std::invalid_argument("alpha values must lie in (0,1]");
    for (std::size_t j = 0; j < etas.size(); ++j) {
      if (etas[j] < 0 || etas[j] > 1) throw std::invalid_argument("eta values must lie in [0,1]");
      grid.ceiling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          certified_ceiling(tau, alphas[i], etas[j]);
    }
  }
  for (const Rational& eta : etas) {
    if (eta >= 1) {
      grid.boundary.emplace_back(std::nullopt);
    } else {
      grid.boundary.emplace_back(tau / (1 - eta));
    }
  }
  return grid;
}

double clopper_pearson_upper(long errors, long trials, double delta) {
  if (trials <= 0 || errors < 0 || errors > trials) throw std::invalid_argument("bad binomial counts");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (errors == trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(errors + 1), static_cast<double>(trials - errors),
                                1.0 - delta);
}

SlackBounds expected_and_hp_slack(const std::map<std::string, Rational>& eps, double delta,
                                  const std::map<std::string, long>& sample_sizes) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  SlackBounds out;
  out.eta_expected = 0;
  for (const auto& [cls, e] : eps) {
    if (e < 0 || e > 1) throw std::invalid_argument("error rate for " + cls + " outside [0,1]");
    out.eta_expected = std::max(out.eta_expected, e);
    auto n = sample_sizes.find(cls);
    if (n == sample_sizes.end()) {
      if (e > 0) throw std::invalid_argument("class " + cls + " has a positive error rate but no sample size");
      out.per_class_upper[cls] = 0.0;
      continue;
    }
    const Rational expected_errors = e * n->second;
    Integer errors = boost::multiprecision::numerator(expected_errors) /
                     boost::multiprecision::denominator(expected_errors);
    if (Rational(errors) < expected_errors) errors += 1;
    const double upper = clopper_pearson_upper(errors.convert_to<long>(), n->second, delta);
    out.per_class_upper[cls] = upper;
    out.eta_high_probability = std::max(out.eta_high_probability, upper);
  }
  return out;
}

}  // namespace semaudit
