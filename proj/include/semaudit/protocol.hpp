#ifndef SEMAUDIT_PROTOCOL_HPP_
#define SEMAUDIT_PROTOCOL_HPP_

#include <string>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

// One candidate transformation (v, u) with its attribute check and
// validation confidence.
struct Edge {
  std::string v;
  std::string u;
  bool attribute_ok = true;
  Rational confidence;
};

struct ProtocolSpec {
  std::vector<Edge> candidate_edges;
  Rational threshold;  // ρ
};

// Cells list member ids in universe order; cells are ordered by their
// representative, the member that comes first in the universe.
using Partition = std::vector<std::vector<std::string>>;

// Edges with attribute_ok and confidence >= threshold. Throws on a
// confidence or threshold outside [0,1].
std::vector<Edge> admissible_edges(const ProtocolSpec& spec);

// Connected components of the symmetrized admissible edge set over
// `variant_ids`. Throws std::invalid_argument on a dangling edge endpoint.
Partition induce_partition(const ProtocolSpec& spec, const std::vector<std::string>& variant_ids);

// True iff every cell of `fine` lies inside one cell of `coarse`. Throws when
// the two partitions are not over the same universe.
bool refines(const Partition& fine, const Partition& coarse);

// Partition currently published by a catalog's class table.
Partition partition_of(const Catalog& catalog);

struct ClassDiagnostics {
  int max_path_length = 0;
  Rational weakest_edge_confidence{1};
};

// Per cell: hop diameter of the admissible subgraph restricted to the cell
// and the lowest admissible confidence inside it. Singletons report (0, 1).
std::vector<ClassDiagnostics> diagnostics(const ProtocolSpec& spec, const Partition& partition);

struct RelabeledCatalog {
  Catalog catalog;
  // One note per class whose audited label was inherited from a split or
  // merged source class.
  std::vector<std::string> label_notes;
};

// Re-publishes `catalog` under a new partition of the same variants.
//
// A cell that equals a source class keeps its id and labels. A cell carved
// out of one source class is named "<source>/<first member>" and inherits the
// source labels. A cell spanning several source classes is named by joining
// the source ids with '+'; it is audited harmful if any source is, and keeps
// an ideal label only when all sources declare the same one.
RelabeledCatalog apply_partition(const Catalog& catalog, const Partition& partition);

}  // namespace semaudit

#endif  // SEMAUDIT_PROTOCOL_HPP_
