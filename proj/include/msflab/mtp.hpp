#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "msflab/graph.hpp"
#include "msflab/labels.hpp"

namespace msflab {

/// Deterministic equivariant transport rule: nonnegative mass sent from one
/// vertex to another, computed from the labeled ball of locality_radius
/// around the pair.
struct TransportRule {
  std::string name;
  std::uint32_t locality_radius = 1;
  std::function<double(const Graph&, const Labeling&, VertexId from, VertexId to)> mass;
};

struct MtpReport {
  std::string rule_name;
  std::uint32_t replicates = 0;
  double mean_out = 0.0;  // average over vertices and replicates of sent mass
  double mean_in = 0.0;   // same for received mass
  double mean_out_se = 0.0;
  double mean_in_se = 0.0;
  double max_abs_gap = 0.0;  // max per-configuration |total out - total in|
  double tolerance = 0.0;
  bool within_tolerance = false;
};

// Mass transport check on an exactly vertex-transitive host (torus or cycle:
// empty boundary required). Total sent equals total received per
// configuration by double counting; the two sides are accumulated along
// different summation orders, so the gap measures floating-point error only.
MtpReport mtp_check(const Graph& g, const TransportRule& rule,
                    std::uint32_t replicates, std::uint64_t seed, double tolerance);

// min_label_neighbor, edge_label_to_neighbors, uniform_split.
const std::vector<TransportRule>& builtin_transport_rules();

// Builtins plus unit_clockwise (cycle hosts) and zero.
const TransportRule& find_transport_rule(const std::string& name);

// CSV: rule_name, replicates, mean_out, mean_in, max_abs_gap
std::string mtp_csv(std::span<const MtpReport> reports);

}  // namespace msflab
