#ifndef SEMAUDIT_METRIC_HPP_
#define SEMAUDIT_METRIC_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

enum class ScoreKind { kFragile, kEnvelope, kClassMean };

std::string_view to_string(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view name);

// Per-variant score map, materialized in catalog order.
struct ScoreFunction {
  ScoreKind kind = ScoreKind::kFragile;
  RationalVector values;
};

// Classwise reductions of a per-variant vector; the result is broadcast back
// to every member so it stays aligned with catalog order.
template <typename Scalar>
Vector<Scalar> classwise_max(const Catalog& catalog, const Vector<Scalar>& values) {
  Vector<Scalar> out(values.size());
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    const auto& members = catalog.members(c);
    if (members.empty()) continue;
    Scalar best = values[members.front()];
    for (Eigen::Index v : members) best = std::max(best, values[v]);
    for (Eigen::Index v : members) out[v] = best;
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> classwise_min(const Catalog& catalog, const Vector<Scalar>& values) {
  Vector<Scalar> out(values.size());
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    const auto& members = catalog.members(c);
    if (members.empty()) continue;
    Scalar best = values[members.front()];
    for (Eigen::Index v : members) best = std::min(best, values[v]);
    for (Eigen::Index v : members) out[v] = best;
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> classwise_mean(const Catalog& catalog, const Vector<Scalar>& values) {
  Vector<Scalar> out(values.size());
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    const auto& members = catalog.members(c);
    if (members.empty()) continue;
    Scalar total(0);
    for (Eigen::Index v : members) total += values[v];
    const Scalar mean = total / Scalar(static_cast<long>(members.size()));
    for (Eigen::Index v : members) out[v] = mean;
  }
  return out;
}

template <typename Scalar>
bool is_classwise_constant(const Catalog& catalog, const Vector<Scalar>& values) {
  return values == classwise_max(catalog, values);
}

ScoreFunction fragile_score(const Catalog& catalog);

// Env(m)(v): the largest score in v's class.
ScoreFunction envelope_lift(const Catalog& catalog);

// Mean(m)(v): arithmetic mean of the scores in v's class.
ScoreFunction class_mean_lift(const Catalog& catalog);

ScoreFunction make_score(const Catalog& catalog, ScoreKind kind);

// M_m(x) = Σ x_v m(v). Throws std::invalid_argument on a dimension mismatch.
template <typename Scalar>
Scalar evaluate(const ScoreFunction& score, const Vector<Scalar>& x) {
  if (x.size() != score.values.size()) {
    throw std::invalid_argument("strategy and score function have different domains");
  }
  return x.dot(scalar_cast<Scalar>(score.values));
}

struct InvarianceWitness {
  std::string class_id;
  Strategy x;  // point mass on the highest-scoring member
  Strategy y;  // point mass on the lowest-scoring member
  Rational gap;
};

// Two class-mass-equivalent strategies with different metric values, or
// nothing when the score is classwise constant. Point masses inside one class
// suffice: any non-constant class exposes a witness.
std::optional<InvarianceWitness> invariance_witness(const Catalog& catalog, const ScoreFunction& score);

}  // namespace semaudit

#endif  // SEMAUDIT_METRIC_HPP_
