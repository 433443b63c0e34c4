#ifndef SEMAUDIT_CATALOGS_HPP_
#define SEMAUDIT_CATALOGS_HPP_

#include "semaudit/catalog.hpp"
#include "semaudit/protocol.hpp"

namespace semaudit {

// Four benign singletons B1..B4 and three harm-pure classes H1..H3, each with
// an original high-score variant and a manipulated low-score one.
Catalog deterministic_catalog();

// Two benign singletons and two harmful orig/manip pairs. The benign
// variants reuse B1 and B3 of the deterministic catalog.
Catalog six_variant_catalog();

// Candidate edges over the six-variant universe: H1 at confidence 0.95, H2
// at 0.80, and a B1–B3 edge that fails its attribute check.
ProtocolSpec six_variant_protocol(const Rational& threshold);

// The six-variant catalog re-published under the partition induced at ρ.
RelabeledCatalog six_variant_at(const Rational& threshold);

// Three harmful classes of three cases each (scores 0.92·(1 − 0.3i)) and one
// benign control. Variant ids are "<functionality>/v<i>".
Catalog hatecheck_catalog();

}  // namespace semaudit

#endif  // SEMAUDIT_CATALOGS_HPP_
