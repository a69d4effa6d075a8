#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "msflab/graph.hpp"

namespace msflab {

// Total comparison key: raw label first, edge id as tie-break. Keeps "the
// maximum on a cycle" unique even when float labels collide.
struct EdgeKey {
  double label;
  EdgeId edge;

  friend bool operator<(const EdgeKey& x, const EdgeKey& y) {
    if (x.label != y.label) return x.label < y.label;
    return x.edge < y.edge;
  }
  friend bool operator==(const EdgeKey& x, const EdgeKey& y) {
    return x.label == y.label && x.edge == y.edge;
  }
  friend bool operator>(const EdgeKey& x, const EdgeKey& y) { return y < x; }
};

/// One label in [0,1) per edge of the host graph. Immutable value type; the
/// coupling transformations return new labelings.
class Labeling {
 public:
  static Labeling from_values(std::vector<double> values, std::uint64_t seed,
                              std::string provenance);

  EdgeId edge_count() const { return static_cast<EdgeId>(values_.size()); }
  double value(EdgeId e) const { return values_[e]; }
  EdgeKey key(EdgeId e) const { return EdgeKey{values_[e], e}; }
  const std::vector<double>& values() const { return values_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& provenance() const { return provenance_; }

  // Transformation (1): label -> p + (1-p)*label on the given edges.
  // Transformed labels land in [p,1); relative order inside the set is kept.
  Labeling shifted_up(std::span<const EdgeId> edges, double p) const;

  // Transformation (2): label -> p*label on the given edges; lands in [0,p).
  Labeling scaled_down(std::span<const EdgeId> edges, double p) const;

  // Applies a strictly increasing [0,1)->[0,1) map to every label. Observed
  // inversions (checked over all value-adjacent pairs) are rejected.
  Labeling relabeled(const std::function<double(double)>& f) const;

  // Copy with one label replaced.
  Labeling replaced(EdgeId e, double value) const;

 private:
  Labeling(std::vector<double> values, std::uint64_t seed, std::string provenance)
      : values_(std::move(values)), seed_(seed), provenance_(std::move(provenance)) {}

  std::vector<double> values_;
  std::uint64_t seed_;
  std::string provenance_;
};

// I.i.d. uniform [0,1) labels. The label of edge e depends on (seed, e) only,
// never on graph size or iteration order.
Labeling sample_labels(const Graph& g, std::uint64_t seed);

// Edges with raw label < p, ascending edge id (the set "kappa_p").
std::vector<EdgeId> edges_below(const Labeling& lab, double p);

// All edge ids sorted by the total comparison key.
std::vector<EdgeId> edges_by_key(const Labeling& lab);

// Edge sets a coupling scenario acts on: a simple path P, the disc D of all
// edges incident to an inner vertex of P, and the threshold p.
struct ScenarioEdgeSets {
  std::vector<EdgeId> path_edges;  // ordered along the path
  std::vector<EdgeId> inner_disc;  // D, ascending edge id
  double p;
};

// Validates that `path` is a simple path in g and derives D from it.
ScenarioEdgeSets make_scenario_edge_sets(const Graph& g, std::vector<EdgeId> path,
                                         double p);

// Vertex sequence of a simple path given as consecutive edges; throws if the
// edges do not form a simple path.
std::vector<VertexId> path_vertices(const Graph& g, std::span<const EdgeId> path);

// Plain text: `seed S` header, then `edge_id label` lines (17 significant
// digits). Round-trips bit-exactly.
std::string write_labeling(const Labeling& lab);
Labeling read_labeling(const std::string& text);

}  // namespace msflab
