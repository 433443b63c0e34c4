#include "semaudit/metric.hpp"

#include <stdexcept>

namespace semaudit {

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kFragile:
      return "fragile";
    case ScoreKind::kEnvelope:
      return "envelope";
    case ScoreKind::kClassMean:
      return "class_mean";
  }
  return "unknown";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "fragile") return ScoreKind::kFragile;
  if (name == "envelope") return ScoreKind::kEnvelope;
  if (name == "class_mean" || name == "class-mean" || name == "mean") return ScoreKind::kClassMean;
  throw std::invalid_argument("unknown score kind: " + std::string(name));
}

ScoreFunction fragile_score(const Catalog& catalog) { return {ScoreKind::kFragile, catalog.scores()}; }

ScoreFunction envelope_lift(const Catalog& catalog) {
  require_valid(catalog);
  return {ScoreKind::kEnvelope, classwise_max(catalog, catalog.scores())};
}

ScoreFunction class_mean_lift(const Catalog& catalog) {
  require_valid(catalog);
  return {ScoreKind::kClassMean, classwise_mean(catalog, catalog.scores())};
}

ScoreFunction make_score(const Catalog& catalog, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kFragile:
      return fragile_score(catalog);
    case ScoreKind::kEnvelope:
      return envelope_lift(catalog);
    case ScoreKind::kClassMean:
      return class_mean_lift(catalog);
  }
  throw std::invalid_argument("unknown score kind");
}

std::optional<InvarianceWitness> invariance_witness(const Catalog& catalog, const ScoreFunction& score) {
  require_valid(catalog);
  if (score.values.size() != catalog.size()) {
    throw std::invalid_argument("score function does not match catalog");
  }
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    const auto& members = catalog.members(c);
    Eigen::Index hi = members.front();
    Eigen::Index lo = members.front();
    for (Eigen::Index v : members) {
      if (score.values[v] > score.values[hi]) hi = v;
      if (score.values[v] < score.values[lo]) lo = v;
    }
    if (score.values[hi] == score.values[lo]) continue;
    InvarianceWitness w;
    w.class_id = catalog.classes()[c].id;
    w.x = point_mass(catalog, catalog.variants()[hi].id);
    w.y = point_mass(catalog, catalog.variants()[lo].id);
    w.gap = score.values[hi] - score.values[lo];
    return w;
  }
  return std::nullopt;
}

}  // namespace semaudit
