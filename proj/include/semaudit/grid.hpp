#ifndef SEMAUDIT_GRID_HPP_
#define SEMAUDIT_GRID_HPP_

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/metric.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

// Strategies whose coordinates are multiples of 1/step_denominator.
struct GridSpec {
  long step_denominator = 20;
  long dimension = 1;
};

inline constexpr long long kMaxGridPoints = 100'000'000;

class GridTooLarge : public std::length_error {
 public:
  explicit GridTooLarge(const Integer& count)
      : std::length_error("grid has " + count.str() + " points, above the enumeration guard of " +
                          std::to_string(kMaxGridPoints)),
        count_(count) {}
  const Integer& count() const { return count_; }

 private:
  Integer count_;
};

// C(k+n−1, n−1), the number of weak compositions of k into n parts.
Integer grid_size(const GridSpec& spec);

// Throws std::invalid_argument on a malformed spec and GridTooLarge above the guard.
void check_grid(const GridSpec& spec);

// Steps through weak compositions of `total` into `parts` parts in
// descending lexicographic order, starting from (total, 0, ..., 0).
class CompositionWalker {
 public:
  CompositionWalker(long total, long parts) : counts_(static_cast<std::size_t>(parts), 0) {
    if (parts < 1 || total < 0) throw std::invalid_argument("bad composition shape");
    counts_.front() = total;
  }

  const std::vector<long>& counts() const { return counts_; }

  bool next() {
    const std::size_t n = counts_.size();
    // Rightmost nonzero coordinate that is not the last one gives one unit to
    // its neighbour, which also collects everything to its right.
    for (std::size_t i = n - 1; i-- > 0;) {
      if (counts_[i] == 0) continue;
      long tail = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        tail += counts_[j];
        counts_[j] = 0;
      }
      counts_[i] -= 1;
      counts_[i + 1] = tail + 1;
      return true;
    }
    return false;
  }

 private:
  std::vector<long> counts_;
};

template <typename Fn>
void for_each_grid_point(const GridSpec& spec, Fn&& fn) {
  check_grid(spec);
  CompositionWalker walker(spec.step_denominator, spec.dimension);
  do {
    fn(walker.counts());
  } while (walker.next());
}

Strategy grid_strategy(const std::vector<long>& counts, long step_denominator);

// Every grid strategy, materialized. Intended for small grids.
std::vector<Strategy> enumerate_grid(const GridSpec& spec);

template <typename Scalar>
struct GridMaximum {
  Scalar value;
  std::vector<long> counts;  // argmax, first in enumeration order
  Strategy witness;
  long long visited = 0;
};

namespace detail {

template <typename Scalar>
struct PartialMax {
  bool found = false;
  Scalar scaled{};  // k·value
  std::vector<long> counts;
  long long visited = 0;
};

// Scans the slice of the grid whose first coordinate equals `head`.
template <typename Scalar>
PartialMax<Scalar> scan_slice(const Vector<Scalar>& weight, long k, long head) {
  PartialMax<Scalar> out;
  const long n = static_cast<long>(weight.size());
  std::vector<long> counts(static_cast<std::size_t>(n), 0);
  counts[0] = head;
  auto visit = [&](const std::vector<long>& c) {
    Scalar total = weight[0] * Scalar(head);
    for (std::size_t j = 1; j < c.size(); ++j) {
      if (c[j] != 0) total += weight[static_cast<Eigen::Index>(j)] * Scalar(c[j]);
    }
    ++out.visited;
    if (!out.found || total > out.scaled) {
      out.found = true;
      out.scaled = total;
      out.counts = c;
    }
  };
  if (n == 1) {
    if (head == k) visit(counts);
    return out;
  }
  CompositionWalker tail(k - head, n - 1);
  do {
    std::copy(tail.counts().begin(), tail.counts().end(), counts.begin() + 1);
    visit(counts);
  } while (tail.next());
  return out;
}

}  // namespace detail

// Maximum over the grid of Σ x_v w_v, scanned in slices of the first
// coordinate. Slices can run on several threads; merging keeps the first
// maximizer in enumeration order, so results do not depend on `threads`.
template <typename Scalar>
GridMaximum<Scalar> grid_maximize(const Vector<Scalar>& weight, const GridSpec& spec, int threads = 1) {
  if (weight.size() != spec.dimension) throw std::invalid_argument("weight vector does not match grid dimension");
  check_grid(spec);
  const long k = spec.step_denominator;
  std::vector<detail::PartialMax<Scalar>> slices(static_cast<std::size_t>(k + 1));
  if (threads <= 1) {
    for (long head = k; head >= 0; --head) slices[static_cast<std::size_t>(k - head)] = detail::scan_slice(weight, k, head);
  } else {
    std::vector<std::future<void>> jobs;
    for (int t = 0; t < threads; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (long s = t; s <= k; s += threads) slices[static_cast<std::size_t>(s)] = detail::scan_slice(weight, k, k - s);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  GridMaximum<Scalar> out{};
  bool found = false;
  Scalar best{};
  for (const auto& s : slices) {
    out.visited += s.visited;
    if (!s.found) continue;
    if (!found || s.scaled > best) {
      found = true;
      best = s.scaled;
      out.counts = s.counts;
    }
  }
  out.value = best / Scalar(k);
  out.witness = grid_strategy(out.counts, k);
  return out;
}

// max over the grid of H*(x) − M(x)/alpha, with the first maximizer.
template <typename Scalar = Rational>
GridMaximum<Scalar> max_violation(const Catalog& catalog, const ScoreFunction& score, const Rational& alpha,
                                  const GridSpec& spec, int threads = 1) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (spec.dimension != catalog.size()) throw std::invalid_argument("grid dimension must equal catalog size");
  const Vector<Scalar> weight =
      scalar_cast<Scalar>(catalog.latent_harm()) - scalar_cast<Scalar>(score.values) / scalar_cast<Scalar>(alpha);
  return grid_maximize(weight, spec, threads);
}

// Scans the grid for two strategies with equal class masses but different
// metric values; returns the first such pair met in enumeration order.
template <typename Scalar = Rational>
std::optional<std::pair<Strategy, Strategy>> grid_invariance_check(const Catalog& catalog,
                                                                   const ScoreFunction& score,
                                                                   const GridSpec& spec) {
  if (spec.dimension != catalog.size()) throw std::invalid_argument("grid dimension must equal catalog size");
  const Vector<Scalar> m = scalar_cast<Scalar>(score.values);
  std::map<std::vector<long>, std::pair<Scalar, std::vector<long>>> seen;
  std::optional<std::pair<std::vector<long>, std::vector<long>>> hit;
  check_grid(spec);
  CompositionWalker walker(spec.step_denominator, spec.dimension);
  do {
    const auto& c = walker.counts();
    std::vector<long> key(static_cast<std::size_t>(catalog.num_classes()), 0);
    Scalar value(0);
    for (std::size_t v = 0; v < c.size(); ++v) {
      if (c[v] == 0) continue;
      key[static_cast<std::size_t>(catalog.class_of(static_cast<Eigen::Index>(v)))] += c[v];
      value += m[static_cast<Eigen::Index>(v)] * Scalar(c[v]);
    }
    auto [it, inserted] = seen.try_emplace(std::move(key), value, c);
    if (!inserted && it->second.first != value) hit = std::pair{it->second.second, c};
  } while (!hit && walker.next());
  if (!hit) return std::nullopt;
  return std::pair{grid_strategy(hit->first, spec.step_denominator),
                   grid_strategy(hit->second, spec.step_denominator)};
}

}  // namespace semaudit

#endif  // SEMAUDIT_GRID_HPP_
