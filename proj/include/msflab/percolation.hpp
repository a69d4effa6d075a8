#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msflab/graph.hpp"
#include "msflab/labels.hpp"

namespace msflab {

/// G_p: the subgraph of edges with raw label < p (the tie-break key plays no
/// role against a scalar threshold). Components cover the full vertex set;
/// vertices without an open edge are singletons and are not part of G_p
/// proper, so they never count as clusters.
struct ThresholdView {
  double p = 0.0;
  std::vector<EdgeId> open_edges;  // ascending edge id
  std::vector<std::uint32_t> component_of;
  std::uint32_t component_count = 0;
  std::vector<char> boundary_touching;           // per component
  std::vector<std::uint32_t> component_vertices;  // per component

  // Components of G_p that reach the boundary: touching and non-singleton.
  // The finite proxy for the number of infinite clusters (G_p^*).
  std::uint32_t boundary_cluster_count() const;
};

ThresholdView threshold_view(const Graph& g, const Labeling& lab, double p);

// Level at which the mean boundary-cluster count is considered "unique".
inline constexpr double kUniquenessTolerance = 0.1;

struct SweepResult {
  std::vector<double> p_grid;
  std::vector<double> crossing_probability;
  std::vector<double> crossing_se;
  std::vector<double> mean_boundary_clusters;
  std::vector<double> clusters_se;
  std::uint32_t replicates = 0;
  // p where the crossing probability passes 1/2, linearly interpolated on the
  // grid; unset when the level is never reached.
  std::optional<double> pc_estimate;
  // Smallest grid p with mean boundary clusters <= 1 + kUniquenessTolerance;
  // unset = "not reached".
  std::optional<double> pu_proxy;
};

// Monte Carlo sweep over the grid: per-p probability that the center connects
// to the boundary in G_p, and per-p mean count of boundary-touching clusters.
// Replicate r uses the labeling sampled from child_seed(seed, r), so results
// do not depend on execution order or worker count.
SweepResult estimate_pc(const Graph& g, std::span<const double> p_grid,
                        std::uint32_t replicates, std::uint64_t seed);
SweepResult uniqueness_proxy(const Graph& g, std::span<const double> p_grid,
                             std::uint32_t replicates, std::uint64_t seed);

// CSV: p, crossing_prob, crossing_se, mean_boundary_clusters, clusters_se, replicates
std::string sweep_csv(const SweepResult& r);

}  // namespace msflab
