#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msflab/graph.hpp"
#include "msflab/labels.hpp"
#include "msflab/msf.hpp"

namespace msflab {

/// Finite end-structure proxy for one forest tree. A cut at radius r removes
/// the vertices at graph distance < r from the host center; the branches are
/// the remaining components of the tree that still reach the boundary. A
/// branch is flagged isolated when it is a bare path beyond the cut.
struct EndStats {
  std::uint32_t tree_id = 0;
  std::vector<std::uint32_t> cut_radii;
  std::vector<std::uint32_t> branch_counts;        // per cut radius
  std::vector<std::vector<char>> isolated_flags;   // per cut radius, per branch
};

EndStats end_count_proxy(const Forest& f, const Graph& g, std::uint32_t tree_id,
                         std::span<const std::uint32_t> cut_radii);

// CSV: tree_id, cut_radius, branch_count, isolated_flags_packed
std::string end_stats_csv(std::span<const EndStats> stats);

// Number of wired trees inside a free tree: 1 + |free_tree \ wired|. Also
// verified internally against the component count of free_tree after deleting
// those edges. free_tree must be a tree (connected, acyclic).
std::uint32_t wired_subtree_count(const Graph& g, std::span<const EdgeId> free_tree,
                                  const Forest& wired);

// Free trees whose edge set, restricted to the window (edges with both
// endpoints within window_radius of the center), equals the window
// restriction of some wired tree.
std::vector<std::uint32_t> detect_lonely(const Graph& g, const Forest& free_forest,
                                         const Forest& wired_forest,
                                         std::uint32_t window_radius);

/// Everything one coupling step acts on: path P between two boundary-touching
/// components of G_p, the edge disc D around P's inner vertices, the tracked
/// tree of FMSF∩kappa_p at P's K_1 endpoint, and the two derived labelings
/// (kappa'' from the shift-up on D\P, kappa' after also scaling P down).
struct CouplingScenario {
  ScenarioEdgeSets sets;
  std::vector<VertexId> k1_vertices;
  std::vector<VertexId> k2_vertices;
  std::uint32_t tracked_tree = 0;  // tree id in the FMSF∩kappa_p forest
  VertexId endpoint_k1 = 0;
  VertexId endpoint_k2 = 0;
  Labeling shifted;  // kappa''
  Labeling coupled;  // kappa'
};

// Derives the scenario from (g, lab, path, p). Throws naming the failing
// condition when (i) or (iii) does not hold; condition (ii) is relaxed to
// "the tracked tree has at least one edge".
CouplingScenario build_coupling_scenario(const Graph& g, const Labeling& lab,
                                         std::vector<EdgeId> path, double p);

// Shortest path from the first boundary-touching cluster of G_p to any other,
// or nullopt when fewer than two exist or none is reachable.
std::optional<std::vector<EdgeId>> find_scenario_path(const Graph& g,
                                                      const Labeling& lab, double p);

struct CouplingAssertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CouplingReport {
  std::vector<CouplingAssertion> assertions;
  bool all_pass = false;
  EndStats tracked_before;  // tracked tree in FMSF(kappa)∩kappa_p
  EndStats merged_after;    // its tree in FMSF(kappa')∩kappa'_p
};

// Replays the label coupling and checks every finite-scale consequence:
// P lands below p, inner vertices see no open edge off P, P joins the free
// forest of kappa', the forest changes stay inside D\P with |delta| <= 2|D\P|,
// FMSF∩kappa''_p survives into FMSF∩kappa'_p, and T, P and the far-side tree
// S end up inside one free tree.
CouplingReport replay_coupling(const Graph& g, const Labeling& lab,
                               const CouplingScenario& sc,
                               std::span<const std::uint32_t> cut_radii);

// Built-in 8-vertex demonstration instance: two boundary-touching triangle
// clusters at p = 0.5 joined by a 2-edge path with one extra disc edge.
struct DemoCoupling {
  Graph graph;
  Labeling labels;
  std::vector<EdgeId> path;
  double p;
};
DemoCoupling demo_coupling();

}  // namespace msflab
