#include "semaudit/generator.hpp"

#include <limits>
#include <stdexcept>

namespace semaudit {

namespace {

bool on_quantum(const Rational& r) { return boost::multiprecision::denominator(r * kDrawQuantum) == 1; }

void check_range(const Range& r, const char* what, bool unit) {
  if (r.lo > r.hi) throw std::invalid_argument(std::string(what) + " range is inverted");
  if (!on_quantum(r.lo) || !on_quantum(r.hi)) {
    throw std::invalid_argument(std::string(what) + " range endpoints must be multiples of 1/10000");
  }
  if (r.lo < 0 || (unit && r.hi > 1)) throw std::invalid_argument(std::string(what) + " range leaves [0,1]");
}

}  // namespace

void validate_config(const GeneratorConfig& cfg) {
  if (cfg.benign_classes < 0 || cfg.harmful_classes < 0) throw std::invalid_argument("class counts must be >= 0");
  check_range(cfg.benign_score, "benign score", true);
  check_range(cfg.benign_utility, "benign utility", false);
  check_range(cfg.orig_score, "original score", true);
  check_range(cfg.manip_score, "manipulated score", true);
  check_range(cfg.orig_utility, "original utility", false);
  check_range(cfg.manip_uplift, "utility uplift", false);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty draw range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t raw;
  do {
    raw = rng();
  } while (raw >= limit);
  return raw % bound;
}

Rational draw(std::mt19937_64& rng, const Range& range) {
  const Rational lo = range.lo * kDrawQuantum;
  const Rational hi = range.hi * kDrawQuantum;
  const auto lo_i = static_cast<std::uint64_t>(boost::multiprecision::numerator(lo));
  const auto hi_i = static_cast<std::uint64_t>(boost::multiprecision::numerator(hi));
  return Rational(static_cast<long long>(lo_i + uniform_below(rng, hi_i - lo_i + 1)), kDrawQuantum);
}

Catalog sample_catalog(const GeneratorConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Variant> variants;
  std::map<std::string, int> labels;
  for (int i = 1; i <= cfg.benign_classes; ++i) {
    const std::string id = "B" + std::to_string(i);
    const Rational score = draw(rng, cfg.benign_score);
    const Rational utility = draw(rng, cfg.benign_utility);
    variants.push_back({id, id, 0, score, utility});
    labels[id] = 0;
  }
  for (int i = 1; i <= cfg.harmful_classes; ++i) {
    const std::string id = "H" + std::to_string(i);
    const Rational orig_score = draw(rng, cfg.orig_score);
    const Rational manip_score = draw(rng, cfg.manip_score);
    const Rational orig_utility = draw(rng, cfg.orig_utility);
    const Rational uplift = draw(rng, cfg.manip_uplift);
    variants.push_back({id + "-orig", id, 1, orig_score, orig_utility});
    variants.push_back({id + "-manip", id, 1, manip_score, orig_utility + uplift});
    labels[id] = 1;
  }
  return Catalog::from_variants(std::move(variants), labels, labels);
}

Catalog scalability_family(int n_harmful, std::uint64_t seed) {
  if (n_harmful < 1) throw std::invalid_argument("scalability family needs at least one harmful class");
  GeneratorConfig cfg;
  cfg.harmful_classes = n_harmful;
  cfg.seed = seed;
  return sample_catalog(cfg);
}

}  // namespace semaudit
