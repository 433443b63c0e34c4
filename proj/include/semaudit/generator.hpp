#ifndef SEMAUDIT_GENERATOR_HPP_
#define SEMAUDIT_GENERATOR_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "semaudit/catalog.hpp"

namespace semaudit {

// Closed interval of a uniform draw.
struct Range {
  Rational lo;
  Rational hi;
};

struct GeneratorConfig {
  int benign_classes = 5;
  int harmful_classes = 5;
  std::uint64_t seed = 0;
  Range benign_score{Rational(3, 100), Rational(15, 100)};
  Range benign_utility{Rational(50, 100), Rational(70, 100)};
  Range orig_score{Rational(75, 100), Rational(95, 100)};
  Range manip_score{Rational(5, 100), Rational(15, 100)};
  Range orig_utility{Rational(70, 100), Rational(85, 100)};
  Range manip_uplift{Rational(2, 100), Rational(6, 100)};  // manip utility = orig utility + uplift
};

// Identifies the draw procedure in output metadata.
inline constexpr const char* kGeneratorAlgorithm = "mt19937_64/rejection-uniform-int/quantum=1e-4/v1";

// Every draw is a multiple of 1/kDrawQuantum.
inline constexpr long kDrawQuantum = 10'000;

// Throws std::invalid_argument on negative class counts, inverted ranges,
// scores outside [0,1], or ranges whose endpoints are not multiples of the
// draw quantum.
void validate_config(const GeneratorConfig& cfg);

// Uniform integer in [0, bound) from raw 64-bit draws by rejection, so the
// stream means the same thing on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Uniform draw from the quantized range.
Rational draw(std::mt19937_64& rng, const Range& range);

// Harm-pure catalog: benign singleton classes "B<i>", then harmful classes
// "H<i>" with variants "H<i>-orig" and "H<i>-manip". Draw order is fixed:
// each benign class (score, utility), then each harmful class (orig score,
// manip score, orig utility, uplift).
Catalog sample_catalog(const GeneratorConfig& cfg);

// Five benign classes plus n_harmful orig/manip pairs.
Catalog scalability_family(int n_harmful, std::uint64_t seed = 0);

}  // namespace semaudit

#endif  // SEMAUDIT_GENERATOR_HPP_
