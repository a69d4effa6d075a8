#include "msflab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "msflab/rng.hpp"
#include "msflab/union_find.hpp"
#include "msflab/util.hpp"

namespace msflab {

std::uint32_t ThresholdView::boundary_cluster_count() const {
  std::uint32_t n = 0;
  for (std::uint32_t c = 0; c < component_count; ++c)
    if (boundary_touching[c] && component_vertices[c] >= 2) ++n;
  return n;
}

ThresholdView threshold_view(const Graph& g, const Labeling& lab, double p) {
  if (lab.edge_count() != g.edge_count())
    throw std::invalid_argument("threshold_view: labeling does not match the graph");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("threshold_view: p must lie in [0,1]");

  ThresholdView view;
  view.p = p;
  view.open_edges = edges_below(lab, p);

  DisjointSets sets(g.vertex_count());
  for (EdgeId e : view.open_edges) sets.unite(g.edge(e).a, g.edge(e).b);

  std::vector<std::uint32_t> rename(g.vertex_count(), 0xffffffffu);
  view.component_of.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::uint32_t root = sets.find(v);
    if (rename[root] == 0xffffffffu) {
      rename[root] = view.component_count++;
      view.boundary_touching.push_back(0);
      view.component_vertices.push_back(0);
    }
    std::uint32_t c = rename[root];
    view.component_of[v] = c;
    view.component_vertices[c] += 1;
    if (g.is_boundary(v)) view.boundary_touching[c] = 1;
  }
  return view;
}

namespace {

struct ReplicateOutcome {
  double crossing_threshold = 2.0;  // minimax label center->boundary; 2.0 = never
  std::vector<std::uint32_t> cluster_counts;
};

// One incremental union-find pass in ascending label order yields the whole
// curve: the minimax crossing label and the boundary-cluster count at every
// grid point.
ReplicateOutcome sweep_replicate(const Graph& g, const Labeling& lab,
                                 std::span<const double> grid) {
  const std::uint32_t n = g.vertex_count();
  DisjointSets sets(n);
  std::vector<char> touches(n, 0);
  for (VertexId b : g.boundary()) touches[b] = 1;

  ReplicateOutcome out;
  out.cluster_counts.resize(grid.size(), 0);
  std::int64_t live_clusters = 0;
  bool crossed = g.is_boundary(g.center());
  if (crossed) out.crossing_threshold = -1.0;

  auto counted = [&](std::uint32_t root) {
    return touches[root] && sets.component_size(root) >= 2;
  };

  std::vector<EdgeId> order = edges_by_key(lab);
  size_t idx = 0;
  for (size_t k = 0; k < grid.size(); ++k) {
    while (idx < order.size() && lab.value(order[idx]) < grid[k]) {
      EdgeId e = order[idx++];
      std::uint32_t ra = sets.find(g.edge(e).a);
      std::uint32_t rb = sets.find(g.edge(e).b);
      if (ra == rb) continue;
      int before = (counted(ra) ? 1 : 0) + (counted(rb) ? 1 : 0);
      bool touch = touches[ra] || touches[rb];
      sets.unite(ra, rb);
      std::uint32_t root = sets.find(ra);
      touches[root] = touch ? 1 : 0;
      live_clusters += (counted(root) ? 1 : 0) - before;
      if (!crossed && touches[sets.find(g.center())]) {
        crossed = true;
        out.crossing_threshold = lab.value(e);
      }
    }
    out.cluster_counts[k] = static_cast<std::uint32_t>(live_clusters);
  }
  return out;
}

void check_grid(std::span<const double> grid, bool open_interval, const char* who) {
  if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty p grid");
  for (size_t i = 0; i < grid.size(); ++i) {
    bool ok = open_interval ? (grid[i] > 0.0 && grid[i] < 1.0)
                            : (grid[i] >= 0.0 && grid[i] <= 1.0);
    if (!ok) throw std::invalid_argument(std::string(who) + ": p grid value out of range");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(who) + ": p grid must be strictly increasing");
  }
}

SweepResult run_sweep(const Graph& g, std::span<const double> grid,
                      std::uint32_t replicates, std::uint64_t seed) {
  if (replicates < 1) throw std::invalid_argument("sweep: replicates must be >= 1");

  std::vector<ReplicateOutcome> outcomes(replicates);
  parallel_for(replicates, [&](std::uint32_t r) {
    Labeling lab = sample_labels(g, rng::child_seed(seed, r));
    outcomes[r] = sweep_replicate(g, lab, grid);
  });

  SweepResult res;
  res.p_grid.assign(grid.begin(), grid.end());
  res.replicates = replicates;
  const double R = static_cast<double>(replicates);

  std::vector<double> buf(replicates), buf2(replicates);
  for (size_t k = 0; k < grid.size(); ++k) {
    for (std::uint32_t r = 0; r < replicates; ++r)
      buf[r] = outcomes[r].crossing_threshold < grid[k] ? 1.0 : 0.0;
    double phat = pairwise_sum(buf) / R;
    res.crossing_probability.push_back(phat);
    res.crossing_se.push_back(std::sqrt(phat * (1.0 - phat) / R));

    for (std::uint32_t r = 0; r < replicates; ++r) {
      buf[r] = static_cast<double>(outcomes[r].cluster_counts[k]);
      buf2[r] = buf[r] * buf[r];
    }
    double mean = pairwise_sum(buf) / R;
    res.mean_boundary_clusters.push_back(mean);
    double se = 0.0;
    if (replicates > 1) {
      double var = (pairwise_sum(buf2) - R * mean * mean) / (R - 1.0);
      se = std::sqrt(std::max(var, 0.0) / R);
    }
    res.clusters_se.push_back(se);
  }

  // pc: linear interpolation of the crossing curve at level 1/2
  for (size_t k = 0; k < grid.size(); ++k) {
    if (res.crossing_probability[k] >= 0.5) {
      if (k == 0) {
        res.pc_estimate = grid[0];
      } else {
        double lo = res.crossing_probability[k - 1], hi = res.crossing_probability[k];
        res.pc_estimate =
            grid[k - 1] + (grid[k] - grid[k - 1]) * (0.5 - lo) / (hi - lo);
      }
      break;
    }
  }
  // pu proxy: first grid p with mean boundary clusters at the uniqueness level
  for (size_t k = 0; k < grid.size(); ++k) {
    if (res.mean_boundary_clusters[k] <= 1.0 + kUniquenessTolerance) {
      res.pu_proxy = grid[k];
      break;
    }
  }
  return res;
}

}  // namespace

SweepResult estimate_pc(const Graph& g, std::span<const double> p_grid,
                        std::uint32_t replicates, std::uint64_t seed) {
  check_grid(p_grid, /*open_interval=*/true, "estimate_pc");
  if (!g.has_boundary())
    throw std::invalid_argument("estimate_pc: crossing needs a non-empty boundary");
  return run_sweep(g, p_grid, replicates, seed);
}

SweepResult uniqueness_proxy(const Graph& g, std::span<const double> p_grid,
                             std::uint32_t replicates, std::uint64_t seed) {
  check_grid(p_grid, /*open_interval=*/false, "uniqueness_proxy");
  if (!g.has_boundary())
    throw std::invalid_argument(
        "uniqueness_proxy: undefined on boundaryless hosts (torus/cycle)");
  return run_sweep(g, p_grid, replicates, seed);
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "p,crossing_prob,crossing_se,mean_boundary_clusters,clusters_se,replicates\n";
  for (size_t k = 0; k < r.p_grid.size(); ++k) {
    out << format_g17(r.p_grid[k]) << "," << format_g17(r.crossing_probability[k]) << ","
        << format_g17(r.crossing_se[k]) << "," << format_g17(r.mean_boundary_clusters[k])
        << "," << format_g17(r.clusters_se[k]) << "," << r.replicates << "\n";
  }
  return out.str();
}

}  // namespace msflab
