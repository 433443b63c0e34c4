#include "semaudit/grid.hpp"

namespace semaudit {

Integer grid_size(const GridSpec& spec) {
  if (spec.step_denominator < 1 || spec.dimension < 1) throw std::invalid_argument("grid needs k >= 1 and n >= 1");
  // C(k+n-1, n-1) by the multiplicative formula; every partial product is integral.
  Integer out = 1;
  const long top = spec.step_denominator + spec.dimension - 1;
  for (long i = 1; i < spec.dimension; ++i) {
    out = out * (top - spec.dimension + 1 + i) / i;
  }
  return out;
}

void check_grid(const GridSpec& spec) {
  const Integer count = grid_size(spec);
  if (count > kMaxGridPoints) throw GridTooLarge(count);
}

Strategy grid_strategy(const std::vector<long>& counts, long step_denominator) {
  Strategy x(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = Rational(counts[i], step_denominator);
  }
  return x;
}

std::vector<Strategy> enumerate_grid(const GridSpec& spec) {
  std::vector<Strategy> out;
  for_each_grid_point(spec, [&](const std::vector<long>& c) { out.push_back(grid_strategy(c, spec.step_denominator)); });
  return out;
}

}  // namespace semaudit
