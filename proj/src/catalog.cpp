#include "semaudit/catalog.hpp"

#include <set>
#include <sstream>

namespace semaudit {

Catalog::Catalog(std::vector<Variant> variants, std::vector<SemanticClass> classes)
    : variants_(std::move(variants)), classes_(std::move(classes)) {
  for (Eigen::Index i = 0; i < size(); ++i) variant_pos_.emplace(variants_[i].id, i);
  for (Eigen::Index c = 0; c < num_classes(); ++c) class_pos_.emplace(classes_[c].id, c);
  class_of_.assign(variants_.size(), -1);
  members_.assign(classes_.size(), {});
  for (Eigen::Index i = 0; i < size(); ++i) {
    auto it = class_pos_.find(variants_[i].class_id);
    if (it == class_pos_.end()) continue;
    class_of_[i] = it->second;
    members_[it->second].push_back(i);
  }
}

Catalog Catalog::from_variants(std::vector<Variant> variants, const std::map<std::string, int>& audited,
                               const std::map<std::string, int>& ideal) {
  std::vector<SemanticClass> classes;
  std::map<std::string, std::size_t> seen;
  for (const Variant& v : variants) {
    auto [it, inserted] = seen.emplace(v.class_id, classes.size());
    if (inserted) {
      SemanticClass c;
      c.id = v.class_id;
      classes.push_back(std::move(c));
    }
    SemanticClass& c = classes[it->second];
    c.member_ids.push_back(v.id);
    c.audited_label = std::max(c.audited_label, v.latent_harm);
  }
  for (SemanticClass& c : classes) {
    if (auto it = audited.find(c.id); it != audited.end()) c.audited_label = it->second;
    if (auto it = ideal.find(c.id); it != ideal.end()) c.ideal_label = it->second;
  }
  return Catalog(std::move(variants), std::move(classes));
}

std::optional<Eigen::Index> Catalog::variant_index(std::string_view id) const {
  auto it = variant_pos_.find(std::string(id));
  if (it == variant_pos_.end()) return std::nullopt;
  return it->second;
}

std::optional<Eigen::Index> Catalog::class_index(std::string_view id) const {
  auto it = class_pos_.find(std::string(id));
  if (it == class_pos_.end()) return std::nullopt;
  return it->second;
}

RationalVector Catalog::scores() const {
  RationalVector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = variants_[i].score;
  return out;
}

RationalVector Catalog::utilities() const {
  RationalVector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = variants_[i].utility;
  return out;
}

RationalVector Catalog::latent_harm() const {
  RationalVector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = variants_[i].latent_harm;
  return out;
}

RationalVector Catalog::audited_harm() const {
  RationalVector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    out[i] = class_of_[i] < 0 ? 0 : classes_[class_of_[i]].audited_label;
  }
  return out;
}

bool Catalog::has_ideal_labels() const {
  if (classes_.empty()) return false;
  for (const SemanticClass& c : classes_) {
    if (!c.ideal_label) return false;
  }
  return true;
}

std::optional<RationalVector> Catalog::ideal_harm() const {
  if (!has_ideal_labels()) return std::nullopt;
  RationalVector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (class_of_[i] < 0) return std::nullopt;
    out[i] = *classes_[class_of_[i]].ideal_label;
  }
  return out;
}

std::vector<Violation> validate_catalog(const Catalog& catalog) {
  std::vector<Violation> out;
  auto report = [&out](std::string subject, std::string rule, std::string detail) {
    out.push_back({std::move(subject), std::move(rule), std::move(detail)});
  };
  auto binary = [](int x) { return x == 0 || x == 1; };

  std::set<std::string> ids;
  for (const Variant& v : catalog.variants()) {
    if (!ids.insert(v.id).second) report(v.id, "duplicate-variant", "variant id appears more than once");
    if (v.score < 0 || v.score > 1) {
      report(v.id, "score-range", "score " + to_exact_string(v.score) + " outside [0,1]");
    }
    if (v.utility < 0) report(v.id, "utility-range", "utility " + to_exact_string(v.utility) + " is negative");
    if (!binary(v.latent_harm)) report(v.id, "latent-harm-binary", "latent harm must be 0 or 1");
    if (!catalog.class_index(v.class_id)) {
      report(v.id, "unknown-class", "class " + v.class_id + " is not in the class table");
    }
  }

  std::set<std::string> class_ids;
  std::map<std::string, std::string> owner;
  for (const SemanticClass& c : catalog.classes()) {
    if (!class_ids.insert(c.id).second) report(c.id, "duplicate-class", "class id appears more than once");
    if (c.member_ids.empty()) report(c.id, "empty-class", "class has no members");
    if (!binary(c.audited_label)) report(c.id, "audited-label-binary", "audited label must be 0 or 1");
    if (c.ideal_label && !binary(*c.ideal_label)) {
      report(c.id, "ideal-label-binary", "ideal label must be 0 or 1");
    }
    for (const std::string& m : c.member_ids) {
      auto idx = catalog.variant_index(m);
      if (!idx) {
        report(c.id, "unknown-member", "member " + m + " is not a catalog variant");
        continue;
      }
      auto [it, inserted] = owner.emplace(m, c.id);
      if (!inserted) {
        report(m, "overlapping-classes", "listed in both " + it->second + " and " + c.id);
      }
      const Variant& v = catalog.variants()[*idx];
      if (v.class_id != c.id) {
        report(m, "class-assignment", "variant says " + v.class_id + " but class table says " + c.id);
      }
      if (c.ideal_label && v.latent_harm != *c.ideal_label) {
        report(c.id, "harm-purity",
               "member " + m + " has latent harm " + std::to_string(v.latent_harm) +
                   " but the class declares ideal label " + std::to_string(*c.ideal_label));
      }
    }
  }
  for (const Variant& v : catalog.variants()) {
    if (catalog.class_index(v.class_id) && !owner.count(v.id)) {
      report(v.id, "not-covered", "variant is missing from the member list of " + v.class_id);
    }
  }
  return out;
}

void require_valid(const Catalog& catalog) {
  const auto violations = validate_catalog(catalog);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid catalog:";
  for (const Violation& v : violations) msg << "\n  [" << v.rule << "] " << v.subject << ": " << v.detail;
  throw std::invalid_argument(msg.str());
}

Strategy point_mass(const Catalog& catalog, std::string_view variant_id) {
  auto idx = catalog.variant_index(variant_id);
  if (!idx) throw std::invalid_argument("unknown variant id: " + std::string(variant_id));
  Strategy x = Strategy::Zero(catalog.size());
  x[*idx] = 1;
  return x;
}

Strategy uniform_strategy(const Catalog& catalog) {
  if (catalog.size() == 0) throw std::invalid_argument("empty catalog has no strategies");
  return Strategy::Constant(catalog.size(), Rational(1, catalog.size()));
}

Strategy strategy_from_masses(const Catalog& catalog, const std::map<std::string, Rational>& masses) {
  Strategy x = Strategy::Zero(catalog.size());
  for (const auto& [id, mass] : masses) {
    auto idx = catalog.variant_index(id);
    if (!idx) throw std::invalid_argument("unknown variant id: " + id);
    x[*idx] += mass;
  }
  if (!is_distribution(x)) throw std::invalid_argument("masses are not a probability distribution");
  return x;
}

}  // namespace semaudit
