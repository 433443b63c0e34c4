#ifndef SEMAUDIT_CATALOG_HPP_
#define SEMAUDIT_CATALOG_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semaudit/rational.hpp"

namespace semaudit {

struct Variant {
  std::string id;
  std::string class_id;
  int latent_harm = 0;  // h*(v)
  Rational score;       // detector score m(v)
  Rational utility;     // platform utility u(v)
};

struct SemanticClass {
  std::string id;
  std::vector<std::string> member_ids;
  int audited_label = 0;            // published label
  std::optional<int> ideal_label;   // present only under declared harm-purity
};

// A finite variant universe partitioned into semantic classes.
//
// Construction never throws on invariant violations; use validate_catalog()
// or require_valid() before running computations that assume a partition.
// Variant order is the order given at construction and is the order of every
// dense vector (strategies, score vectors) indexed by the catalog.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<Variant> variants, std::vector<SemanticClass> classes);

  // Builds the class table from the variants' class_id column. Classes appear
  // in order of first occurrence and take labels from `audited`/`ideal`
  // (missing audited labels default to the members' maximum latent harm).
  static Catalog from_variants(std::vector<Variant> variants,
                               const std::map<std::string, int>& audited = {},
                               const std::map<std::string, int>& ideal = {});

  const std::vector<Variant>& variants() const { return variants_; }
  const std::vector<SemanticClass>& classes() const { return classes_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(variants_.size()); }
  Eigen::Index num_classes() const { return static_cast<Eigen::Index>(classes_.size()); }

  std::optional<Eigen::Index> variant_index(std::string_view id) const;
  std::optional<Eigen::Index> class_index(std::string_view id) const;

  // Position in classes() of the class holding variant i, or -1 if the
  // variant's class_id names no class.
  Eigen::Index class_of(Eigen::Index variant) const { return class_of_[variant]; }
  const std::vector<Eigen::Index>& class_of() const { return class_of_; }
  // Catalog positions of the members of class c, in catalog order.
  const std::vector<Eigen::Index>& members(Eigen::Index c) const { return members_[c]; }

  RationalVector scores() const;
  RationalVector utilities() const;
  RationalVector latent_harm() const;
  // ĥ([v]) for every variant.
  RationalVector audited_harm() const;
  // h([v]) for every variant; empty when some class lacks an ideal label.
  std::optional<RationalVector> ideal_harm() const;
  bool has_ideal_labels() const;

 private:
  std::vector<Variant> variants_;
  std::vector<SemanticClass> classes_;
  std::unordered_map<std::string, Eigen::Index> variant_pos_;
  std::unordered_map<std::string, Eigen::Index> class_pos_;
  std::vector<Eigen::Index> class_of_;
  std::vector<std::vector<Eigen::Index>> members_;
};

struct Violation {
  std::string subject;  // variant or class id
  std::string rule;     // short rule tag, e.g. "score-range"
  std::string detail;
};

std::vector<Violation> validate_catalog(const Catalog& catalog);

// Throws std::invalid_argument listing every violation.
void require_valid(const Catalog& catalog);

// Strategies are dense probability vectors aligned with catalog order.
using Strategy = RationalVector;

Strategy point_mass(const Catalog& catalog, std::string_view variant_id);
Strategy uniform_strategy(const Catalog& catalog);
// Throws std::invalid_argument on an unknown variant id or a mass map that is
// not a probability distribution.
Strategy strategy_from_masses(const Catalog& catalog, const std::map<std::string, Rational>& masses);

template <typename Scalar>
bool is_distribution(const Vector<Scalar>& x) {
  return (x.array() >= Scalar(0)).all() && x.sum() == Scalar(1);
}

namespace detail {
template <typename Scalar>
void check_domain(const Catalog& catalog, const Vector<Scalar>& x) {
  if (x.size() != catalog.size()) {
    throw std::invalid_argument("strategy dimension " + std::to_string(x.size()) +
                                " does not match catalog size " + std::to_string(catalog.size()));
  }
}
}  // namespace detail

// Σ_{v∈c} x_v for every class c, in class-table order.
template <typename Scalar>
Vector<Scalar> class_mass(const Catalog& catalog, const Vector<Scalar>& x) {
  detail::check_domain(catalog, x);
  Vector<Scalar> out = Vector<Scalar>::Constant(catalog.num_classes(), Scalar(0));
  for (Eigen::Index v = 0; v < x.size(); ++v) {
    const Eigen::Index c = catalog.class_of(v);
    if (c < 0) throw std::invalid_argument("variant " + catalog.variants()[v].id + " has no class");
    out[c] += x[v];
  }
  return out;
}

template <typename Scalar>
std::map<std::string, Scalar> labeled_class_mass(const Catalog& catalog, const Vector<Scalar>& x) {
  const Vector<Scalar> mass = class_mass(catalog, x);
  std::map<std::string, Scalar> out;
  for (Eigen::Index c = 0; c < mass.size(); ++c) out.emplace(catalog.classes()[c].id, mass[c]);
  return out;
}

template <typename Scalar>
struct ExposureReport {
  Scalar true_harm;                   // H*(x)
  Scalar audited_harm;                // Ĥ(x)
  std::optional<Scalar> ideal_harm;   // H(x), only with ideal labels everywhere
  Scalar utility;                     // U(x)
  Scalar disagreement_mass;           // Δ(x)
  Vector<Scalar> class_masses;
};

template <typename Scalar>
ExposureReport<Scalar> exposure_report(const Catalog& catalog, const Vector<Scalar>& x) {
  detail::check_domain(catalog, x);
  const Vector<Scalar> latent = scalar_cast<Scalar>(catalog.latent_harm());
  const Vector<Scalar> audited = scalar_cast<Scalar>(catalog.audited_harm());
  ExposureReport<Scalar> report{
      x.dot(latent),
      x.dot(audited),
      std::nullopt,
      x.dot(scalar_cast<Scalar>(catalog.utilities())),
      x.dot((latent - audited).cwiseAbs()),
      class_mass(catalog, x),
  };
  if (auto ideal = catalog.ideal_harm()) report.ideal_harm = x.dot(scalar_cast<Scalar>(*ideal));
  return report;
}

}  // namespace semaudit

#endif  // SEMAUDIT_CATALOG_HPP_
