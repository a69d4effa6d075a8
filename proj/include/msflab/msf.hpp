#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msflab/graph.hpp"
#include "msflab/labels.hpp"

namespace msflab {

/// Acyclic edge subset plus the component partition it induces on the full
/// vertex set. Component ids are dense and assigned by first vertex
/// occurrence, so equal forests compare equal field by field.
struct Forest {
  std::vector<EdgeId> edges;  // ascending edge id
  std::vector<std::uint32_t> component_of;
  std::uint32_t tree_count = 0;

  bool contains(EdgeId e) const;
  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(component_of.size());
  }
};

// Builds a Forest from an edge set; throws if the set contains a cycle,
// duplicates, or unknown edges.
Forest make_forest(const Graph& g, std::vector<EdgeId> edges);

struct MergeRecord {
  double label;
  EdgeId edge;
  std::uint32_t root_a;
  std::uint32_t root_b;
};
using UnionFindTrace = std::vector<MergeRecord>;

struct TracedForest {
  Forest forest;
  UnionFindTrace trace;
};

// Minimum spanning forest under the (label, edge_id) key: the free forest of
// the finite graph. Unique by the total order.
Forest mst_kruskal(const Graph& g, const Labeling& lab);
TracedForest mst_kruskal_traced(const Graph& g, const Labeling& lab);

// Definition-based membership test, independent of Kruskal: e belongs to the
// forest iff its endpoints are not connected using only edges of strictly
// smaller key.
bool cycle_max_oracle(const Graph& g, const Labeling& lab, EdgeId e);

// Free forest of the boundary-contracted graph, pulled back to the original
// edge ids. Always a subset of mst_kruskal(g, lab): contraction only adds
// cycles. Requires a non-empty boundary.
Forest wired_msf(const Graph& g, const Labeling& lab);

// Prim-style growth from source, absorbing the minimum-key frontier edge.
// With stop_at_boundary, halts as soon as a boundary vertex is absorbed.
// Run to completion on a connected graph this equals mst_kruskal.
Forest invasion_tree(const Graph& g, const Labeling& lab, VertexId source,
                     bool stop_at_boundary);

// Independent oracle: enumerates all maximal spanning forests and returns the
// one minimizing (label sum, sorted key sequence). Guarded to <= 12 vertices
// and <= 25 edges.
Forest brute_force_msf(const Graph& g, const Labeling& lab);

// |MSF(a) symmetric-difference MSF(b)|. Contract: at most 2k when the
// labelings differ on k edges.
std::uint32_t perturbation_delta(const Graph& g, const Labeling& a,
                                 const Labeling& b);

// `tree_count T` header, then the edge ids ascending, one per line.
std::string write_forest(const Forest& f);

}  // namespace msflab
