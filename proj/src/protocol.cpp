#include "semaudit/protocol.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <boost/pending/disjoint_sets.hpp>

namespace semaudit {

namespace {

void check_unit_interval(const Rational& value, const std::string& what) {
  if (value < 0 || value > 1) {
    throw std::invalid_argument(what + " " + to_exact_string(value) + " outside [0,1]");
  }
}

std::unordered_map<std::string, std::size_t> index_universe(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!pos.emplace(ids[i], i).second) throw std::invalid_argument("duplicate variant id " + ids[i]);
  }
  return pos;
}

std::vector<std::string> universe_of(const Partition& p) {
  std::vector<std::string> out;
  for (const auto& cell : p) out.insert(out.end(), cell.begin(), cell.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Edge> admissible_edges(const ProtocolSpec& spec) {
  check_unit_interval(spec.threshold, "threshold");
  std::vector<Edge> out;
  for (const Edge& e : spec.candidate_edges) {
    check_unit_interval(e.confidence, "confidence of edge " + e.v + "-" + e.u);
    if (e.attribute_ok && e.confidence >= spec.threshold) out.push_back(e);
  }
  return out;
}

Partition induce_partition(const ProtocolSpec& spec, const std::vector<std::string>& variant_ids) {
  const auto pos = index_universe(variant_ids);
  const std::size_t n = variant_ids.size();
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) sets.make_set(i);

  for (const Edge& e : spec.candidate_edges) {
    if (!pos.count(e.v) || !pos.count(e.u)) {
      throw std::invalid_argument("edge " + e.v + "-" + e.u + " has an endpoint outside the catalog");
    }
  }
  for (const Edge& e : admissible_edges(spec)) sets.union_set(pos.at(e.v), pos.at(e.u));

  // Cells are emitted in order of their first member.
  std::map<std::size_t, std::size_t> cell_of_root;
  Partition out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find_set(i);
    auto [it, inserted] = cell_of_root.emplace(root, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(variant_ids[i]);
  }
  return out;
}

bool refines(const Partition& fine, const Partition& coarse) {
  if (universe_of(fine) != universe_of(coarse)) {
    throw std::invalid_argument("partitions are over different variant sets");
  }
  std::unordered_map<std::string, std::size_t> coarse_cell;
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    for (const auto& id : coarse[c]) coarse_cell[id] = c;
  }
  for (const auto& cell : fine) {
    for (const auto& id : cell) {
      if (coarse_cell.at(id) != coarse_cell.at(cell.front())) return false;
    }
  }
  return true;
}

Partition partition_of(const Catalog& catalog) {
  Partition out;
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    std::vector<std::string> cell;
    for (Eigen::Index v : catalog.members(c)) cell.push_back(catalog.variants()[v].id);
    out.push_back(std::move(cell));
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return *catalog.variant_index(a.front()) < *catalog.variant_index(b.front());
  });
  return out;
}

std::vector<ClassDiagnostics> diagnostics(const ProtocolSpec& spec, const Partition& partition) {
  const std::vector<Edge> edges = admissible_edges(spec);
  std::vector<ClassDiagnostics> out;
  for (const auto& cell : partition) {
    ClassDiagnostics d;
    std::unordered_map<std::string, std::size_t> local;
    for (std::size_t i = 0; i < cell.size(); ++i) local.emplace(cell[i], i);
    std::vector<std::vector<std::size_t>> adj(cell.size());
    for (const Edge& e : edges) {
      auto a = local.find(e.v);
      auto b = local.find(e.u);
      if (a == local.end() || b == local.end()) continue;
      d.weakest_edge_confidence = std::min(d.weakest_edge_confidence, e.confidence);
      if (a->second == b->second) continue;
      adj[a->second].push_back(b->second);
      adj[b->second].push_back(a->second);
    }
    for (std::size_t s = 0; s < cell.size(); ++s) {
      std::vector<int> dist(cell.size(), -1);
      std::deque<std::size_t> queue{s};
      dist[s] = 0;
      while (!queue.empty()) {
        const std::size_t at = queue.front();
        queue.pop_front();
        d.max_path_length = std::max(d.max_path_length, dist[at]);
        for (std::size_t next : adj[at]) {
          if (dist[next] >= 0) continue;
          dist[next] = dist[at] + 1;
          queue.push_back(next);
        }
      }
    }
    out.push_back(d);
  }
  return out;
}

RelabeledCatalog apply_partition(const Catalog& catalog, const Partition& partition) {
  std::vector<std::string> ids;
  for (const Variant& v : catalog.variants()) ids.push_back(v.id);
  std::vector<std::string> sorted_ids = ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  if (universe_of(partition) != sorted_ids) {
    throw std::invalid_argument("partition does not cover exactly the catalog's variants");
  }

  RelabeledCatalog out;
  std::vector<Variant> variants = catalog.variants();
  std::vector<SemanticClass> classes;
  for (const auto& cell : partition) {
    std::vector<std::string> sources;
    for (const auto& id : cell) {
      const std::string& src = catalog.variants()[*catalog.variant_index(id)].class_id;
      if (std::find(sources.begin(), sources.end(), src) == sources.end()) sources.push_back(src);
    }
    SemanticClass cls;
    cls.member_ids = cell;
    const SemanticClass* first = nullptr;
    if (auto c = catalog.class_index(sources.front())) first = &catalog.classes()[*c];
    if (!first) throw std::invalid_argument("variant " + cell.front() + " has no source class");

    if (sources.size() == 1) {
      cls.audited_label = first->audited_label;
      cls.ideal_label = first->ideal_label;
      if (cell.size() == first->member_ids.size()) {
        cls.id = first->id;
      } else {
        cls.id = first->id + "/" + cell.front();
        out.label_notes.push_back(cls.id + ": split from " + first->id + ", inherits audited label " +
                                  std::to_string(cls.audited_label));
      }
    } else {
      cls.id.clear();
      cls.audited_label = 0;
      cls.ideal_label = first->ideal_label;
      std::size_t source_members = 0;
      for (const auto& src : sources) {
        const SemanticClass& s = catalog.classes()[*catalog.class_index(src)];
        cls.id += (cls.id.empty() ? "" : "+") + s.id;
        cls.audited_label = std::max(cls.audited_label, s.audited_label);
        if (s.ideal_label != cls.ideal_label) cls.ideal_label.reset();
        source_members += s.member_ids.size();
      }
      // Partial merges can share source classes with another cell.
      if (cell.size() != source_members) cls.id += "/" + cell.front();
      out.label_notes.push_back(cls.id + ": merged classes, audited label " + std::to_string(cls.audited_label));
    }
    for (const auto& id : cell) variants[*catalog.variant_index(id)].class_id = cls.id;
    classes.push_back(std::move(cls));
  }
  out.catalog = Catalog(std::move(variants), std::move(classes));
  return out;
}

}  // namespace semaudit
