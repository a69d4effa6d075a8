#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msflab {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = 0xffffffffu;
inline constexpr std::uint32_t kUnreachable = 0xffffffffu;

struct Edge {
  VertexId a;
  VertexId b;
};

/// Finite multigraph approximation of a transitive graph. The boundary set is
/// the finite stand-in for infinity: a component, ray or tree is treated as
/// infinite exactly when it reaches a boundary vertex. Immutable after
/// construction; safe to share across threads.
class Graph {
 public:
  Graph(VertexId vertex_count, std::vector<Edge> edges, VertexId center,
        std::vector<VertexId> boundary, std::string family_tag,
        bool vertex_transitive_host);

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeId> incident(VertexId v) const {
    return adjacency_[v];
  }
  unsigned degree(VertexId v) const {
    return static_cast<unsigned>(adjacency_[v].size());
  }
  VertexId other_end(EdgeId e, VertexId v) const {
    const Edge& ed = edges_[e];
    return ed.a == v ? ed.b : ed.a;
  }

  VertexId center() const { return center_; }
  const std::vector<VertexId>& boundary() const { return boundary_; }
  bool is_boundary(VertexId v) const { return boundary_mask_[v] != 0; }
  bool has_boundary() const { return !boundary_.empty(); }

  const std::string& family_tag() const { return family_tag_; }
  bool is_vertex_transitive_host() const { return transitive_host_; }

 private:
  VertexId vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  VertexId center_;
  std::vector<VertexId> boundary_;  // sorted ascending
  std::vector<char> boundary_mask_;
  std::string family_tag_;
  bool transitive_host_;
};

// Ball of the given radius in the degree-regular tree; boundary = sphere.
Graph gen_tree_ball(unsigned degree, unsigned radius);

// wrap=true: torus (empty boundary, vertex-transitive); wrap=false: box with
// the perimeter as boundary and the central vertex (ties toward smaller
// coordinates) as center.
Graph gen_grid(unsigned width, unsigned height, bool wrap);

// Simple cycle C_n. Empty boundary, vertex-transitive.
Graph gen_cycle(unsigned length);

// Cartesian product of a tree ball with a cycle: a nonamenable host that has
// cycles, so the free forest is nontrivial on it.
Graph gen_tree_cycle_product(unsigned degree, unsigned radius, unsigned cycle_len);

struct ContractionMap {
  VertexId contracted_vertex;
  std::vector<VertexId> vertex_map;      // original vertex -> image vertex
  std::vector<EdgeId> surviving_edges;   // original edge -> image edge, kNoEdge if deleted
  std::vector<EdgeId> preimage;          // image edge -> original edge
};

// Merges all boundary vertices into one; boundary-boundary edges are deleted
// (they would become self-loops). Surviving edges keep their identity through
// the map, so labels transfer one-to-one.
std::pair<Graph, ContractionMap> contract_boundary(const Graph& g);

// BFS distances from source; kUnreachable where disconnected.
std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source);

// Eccentricity of the center: the radius of the finite ball.
std::uint32_t graph_radius(const Graph& g);

// Plain-text edge list. Header `vertices N center C boundary k: b1 b2 ...`,
// then one `edge_id a b` line per edge. Round-trips bit-exactly.
std::string write_graph(const Graph& g);
Graph read_graph(const std::string& text);

bool same_structure(const Graph& a, const Graph& b);

}  // namespace msflab
