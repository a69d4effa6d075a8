#include "msflab/ends.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "msflab/percolation.hpp"
#include "msflab/union_find.hpp"

namespace msflab {

namespace {

std::vector<EdgeId> tree_edge_set(const Forest& f, const Graph& g,
                                  std::uint32_t tree_id) {
  std::vector<EdgeId> out;
  for (EdgeId e : f.edges)
    if (f.component_of[g.edge(e).a] == tree_id) out.push_back(e);
  return out;
}

bool subset_of(std::span<const EdgeId> sub, const std::vector<EdgeId>& sorted_super) {
  for (EdgeId e : sub)
    if (!std::binary_search(sorted_super.begin(), sorted_super.end(), e)) return false;
  return true;
}

}  // namespace

EndStats end_count_proxy(const Forest& f, const Graph& g, std::uint32_t tree_id,
                         std::span<const std::uint32_t> cut_radii) {
  if (f.component_of.size() != g.vertex_count())
    throw std::invalid_argument("end_count_proxy: forest does not match the graph");
  if (tree_id >= f.tree_count)
    throw std::invalid_argument("end_count_proxy: unknown tree id");

  const auto dist = bfs_distances(g, g.center());
  const std::uint32_t ball = graph_radius(g);
  const auto edges = tree_edge_set(f, g, tree_id);

  EndStats stats;
  stats.tree_id = tree_id;
  for (std::uint32_t r : cut_radii) {
    if (r >= ball)
      throw std::invalid_argument("end_count_proxy: cut radius >= ball radius");

    // A cut at radius r removes the vertices closer than r to the center;
    // the branches are the remaining components of the tree.
    auto survives = [&](VertexId v) { return dist[v] >= r; };
    DisjointSets sets(g.vertex_count());
    std::vector<std::uint32_t> degree(g.vertex_count(), 0);
    for (EdgeId e : edges) {
      const Edge& ed = g.edge(e);
      if (survives(ed.a) && survives(ed.b)) {
        sets.unite(ed.a, ed.b);
        ++degree[ed.a];
        ++degree[ed.b];
      }
    }

    std::map<std::uint32_t, std::uint32_t> branch_of_root;  // discovery order
    std::vector<char> touches;
    std::vector<char> is_path;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (f.component_of[v] != tree_id || !survives(v)) continue;
      std::uint32_t root = sets.find(v);
      auto [it, inserted] = branch_of_root.emplace(root, touches.size());
      if (inserted) {
        touches.push_back(0);
        is_path.push_back(1);
      }
      std::uint32_t b = it->second;
      if (g.is_boundary(v)) touches[b] = 1;
      if (degree[v] > 2) is_path[b] = 0;
    }

    std::uint32_t count = 0;
    std::vector<char> flags;
    for (size_t b = 0; b < touches.size(); ++b) {
      if (!touches[b]) continue;  // branch never reaches the boundary
      ++count;
      flags.push_back(is_path[b]);
    }
    stats.cut_radii.push_back(r);
    stats.branch_counts.push_back(count);
    stats.isolated_flags.push_back(std::move(flags));
  }
  return stats;
}

std::string end_stats_csv(std::span<const EndStats> stats) {
  std::ostringstream out;
  out << "tree_id,cut_radius,branch_count,isolated_flags_packed\n";
  for (const EndStats& s : stats) {
    for (size_t i = 0; i < s.cut_radii.size(); ++i) {
      out << s.tree_id << "," << s.cut_radii[i] << "," << s.branch_counts[i] << ",";
      for (char f : s.isolated_flags[i]) out << (f ? '1' : '0');
      out << "\n";
    }
  }
  return out.str();
}

std::uint32_t wired_subtree_count(const Graph& g, std::span<const EdgeId> free_tree,
                                  const Forest& wired) {
  if (free_tree.empty())
    throw std::invalid_argument("wired_subtree_count: empty edge set is not a tree");

  std::vector<VertexId> vertices;
  for (EdgeId e : free_tree) {
    if (e >= g.edge_count())
      throw std::invalid_argument("wired_subtree_count: unknown edge id");
    vertices.push_back(g.edge(e).a);
    vertices.push_back(g.edge(e).b);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  DisjointSets sets(g.vertex_count());
  for (EdgeId e : free_tree)
    if (!sets.unite(g.edge(e).a, g.edge(e).b))
      throw std::invalid_argument("wired_subtree_count: free_tree contains a cycle");
  if (vertices.size() != free_tree.size() + 1)
    throw std::invalid_argument("wired_subtree_count: free_tree is not connected");

  std::uint32_t missing = 0;
  DisjointSets remains(g.vertex_count());
  for (EdgeId e : free_tree) {
    if (wired.contains(e))
      remains.unite(g.edge(e).a, g.edge(e).b);
    else
      ++missing;
  }
  std::uint32_t formula = 1 + missing;

  std::uint32_t traversal = 0;
  for (VertexId v : vertices)
    if (remains.find(v) == v) ++traversal;
  if (formula != traversal)
    throw std::runtime_error("wired_subtree_count: formula/traversal mismatch");
  return formula;
}

std::vector<std::uint32_t> detect_lonely(const Graph& g, const Forest& free_forest,
                                         const Forest& wired_forest,
                                         std::uint32_t window_radius) {
  if (window_radius >= graph_radius(g))
    throw std::invalid_argument("detect_lonely: window radius >= ball radius");
  const auto dist = bfs_distances(g, g.center());
  auto in_window = [&](EdgeId e) {
    return dist[g.edge(e).a] <= window_radius && dist[g.edge(e).b] <= window_radius;
  };

  std::map<std::vector<EdgeId>, char> wired_windows;
  {
    std::vector<std::vector<EdgeId>> per_tree(wired_forest.tree_count);
    for (EdgeId e : wired_forest.edges)
      if (in_window(e)) per_tree[wired_forest.component_of[g.edge(e).a]].push_back(e);
    for (auto& w : per_tree) wired_windows[std::move(w)] = 1;
  }

  std::vector<std::vector<EdgeId>> free_windows(free_forest.tree_count);
  for (EdgeId e : free_forest.edges)
    if (in_window(e)) free_windows[free_forest.component_of[g.edge(e).a]].push_back(e);

  std::vector<std::uint32_t> lonely;
  for (std::uint32_t t = 0; t < free_forest.tree_count; ++t)
    if (wired_windows.count(free_windows[t])) lonely.push_back(t);
  return lonely;
}

namespace {

// FMSF restricted to its open part: the spanning forest the free forest
// induces on the components of G_p.
Forest open_free_forest(const Graph& g, const Labeling& lab, double p) {
  Forest free_forest = mst_kruskal(g, lab);
  std::vector<EdgeId> open;
  for (EdgeId e : free_forest.edges)
    if (lab.value(e) < p) open.push_back(e);
  return make_forest(g, std::move(open));
}

std::vector<VertexId> component_vertices(const ThresholdView& tv, std::uint32_t c) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < tv.component_of.size(); ++v)
    if (tv.component_of[v] == c) out.push_back(v);
  return out;
}

}  // namespace

CouplingScenario build_coupling_scenario(const Graph& g, const Labeling& lab,
                                         std::vector<EdgeId> path, double p) {
  if (lab.edge_count() != g.edge_count())
    throw std::invalid_argument("build_coupling_scenario: labeling/graph mismatch");
  ScenarioEdgeSets sets = make_scenario_edge_sets(g, std::move(path), p);
  const auto seq = path_vertices(g, sets.path_edges);
  const VertexId u = seq.front(), v = seq.back();

  ThresholdView tv = threshold_view(g, lab, p);
  const std::uint32_t c1 = tv.component_of[u], c2 = tv.component_of[v];
  if (c1 == c2)
    throw std::invalid_argument(
        "build_coupling_scenario: condition (i) failed: path endpoints share a G_p component");
  auto check_cluster = [&](std::uint32_t c, const char* which) {
    if (!tv.boundary_touching[c] || tv.component_vertices[c] < 2)
      throw std::invalid_argument(std::string("build_coupling_scenario: condition (i) "
                                              "failed: ") +
                                  which + " is not a boundary-touching cluster of G_p");
  };
  check_cluster(c1, "K_1");
  check_cluster(c2, "K_2");

  Forest open_free = open_free_forest(g, lab, p);
  const std::uint32_t tracked = open_free.component_of[u];
  const auto tracked_edges = tree_edge_set(open_free, g, tracked);
  if (tracked_edges.empty())
    throw std::invalid_argument(
        "build_coupling_scenario: condition (ii) failed: tracked tree T has no edge in K_1");

  std::vector<char> inner(g.vertex_count(), 0);
  for (size_t i = 1; i + 1 < seq.size(); ++i) inner[seq[i]] = 1;
  for (EdgeId e : tracked_edges) {
    const Edge& ed = g.edge(e);
    const bool in_k1 = tv.component_of[ed.a] == c1 && tv.component_of[ed.b] == c1;
    if (in_k1 && (inner[ed.a] || inner[ed.b]))
      throw std::invalid_argument(
          "build_coupling_scenario: condition (iii) failed: an edge of T∩K_1 is incident "
          "to an inner vertex of P");
  }

  std::vector<EdgeId> disc_minus_path = sets.inner_disc;
  {
    std::vector<EdgeId> on_path = sets.path_edges;
    std::sort(on_path.begin(), on_path.end());
    std::vector<EdgeId> diff;
    std::set_difference(disc_minus_path.begin(), disc_minus_path.end(), on_path.begin(),
                        on_path.end(), std::back_inserter(diff));
    disc_minus_path = std::move(diff);
  }

  Labeling shifted = lab.shifted_up(disc_minus_path, p);
  Labeling coupled = shifted.scaled_down(sets.path_edges, p);
  return CouplingScenario{std::move(sets),
                          component_vertices(tv, c1),
                          component_vertices(tv, c2),
                          tracked,
                          u,
                          v,
                          std::move(shifted),
                          std::move(coupled)};
}

std::optional<std::vector<EdgeId>> find_scenario_path(const Graph& g,
                                                      const Labeling& lab, double p) {
  ThresholdView tv = threshold_view(g, lab, p);
  std::vector<char> candidate(tv.component_count, 0);
  std::uint32_t candidates = 0;
  for (std::uint32_t c = 0; c < tv.component_count; ++c)
    if (tv.boundary_touching[c] && tv.component_vertices[c] >= 2) {
      candidate[c] = 1;
      ++candidates;
    }
  if (candidates < 2) return std::nullopt;

  std::uint32_t c1 = 0;
  while (!candidate[c1]) ++c1;

  std::vector<EdgeId> parent_edge(g.vertex_count(), kNoEdge);
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (tv.component_of[v] == c1) {
      seen[v] = 1;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(v)) {
      VertexId w = g.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = 1;
      parent_edge[w] = e;
      std::uint32_t cw = tv.component_of[w];
      if (candidate[cw] && cw != c1) {
        std::vector<EdgeId> path;
        VertexId at = w;
        while (parent_edge[at] != kNoEdge) {
          path.push_back(parent_edge[at]);
          at = g.other_end(parent_edge[at], at);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

CouplingReport replay_coupling(const Graph& g, const Labeling& lab,
                               const CouplingScenario& sc,
                               std::span<const std::uint32_t> cut_radii) {
  // Revalidate from first principles; a hand-built scenario must satisfy the
  // same preconditions and carry the labelings its path and p imply.
  CouplingScenario fresh =
      build_coupling_scenario(g, lab, sc.sets.path_edges, sc.sets.p);
  if (fresh.shifted.values() != sc.shifted.values() ||
      fresh.coupled.values() != sc.coupled.values())
    throw std::invalid_argument(
        "replay_coupling: scenario labelings do not match its path and threshold");

  const double p = sc.sets.p;
  const Labeling& coupled = fresh.coupled;
  const Labeling& shifted = fresh.shifted;

  CouplingReport report;
  auto add = [&](std::string name, bool pass, std::string detail) {
    report.assertions.push_back({std::move(name), pass, std::move(detail)});
  };

  // Every edge of P lands below p in kappa'.
  {
    bool ok = true;
    for (EdgeId e : sc.sets.path_edges) ok = ok && coupled.value(e) < p;
    add("path_below_p", ok, "every edge of P has kappa' label < p");
  }

  // No kappa'-open edge off P touches an inner vertex of P.
  {
    const auto seq = path_vertices(g, sc.sets.path_edges);
    std::vector<char> on_path(g.edge_count(), 0);
    for (EdgeId e : sc.sets.path_edges) on_path[e] = 1;
    bool ok = true;
    for (size_t i = 1; i + 1 < seq.size(); ++i)
      for (EdgeId e : g.incident(seq[i]))
        if (coupled.value(e) < p && !on_path[e]) ok = false;
    add("inner_open_edges_on_path", ok,
        "every kappa'-open edge incident to an inner vertex of P lies on P");
  }

  Forest base = mst_kruskal(g, lab);
  Forest after_shift = mst_kruskal(g, shifted);
  Forest final_forest = mst_kruskal(g, coupled);

  // P joins the free forest of kappa'.
  {
    bool ok = true;
    for (EdgeId e : sc.sets.path_edges) ok = ok && final_forest.contains(e);
    add("path_in_free_forest", ok, "P is contained in MSF(kappa')");
  }

  // Transformation (1) can only evict edges of D\P.
  std::vector<EdgeId> disc_minus_path;
  {
    std::vector<EdgeId> on_path = sc.sets.path_edges;
    std::sort(on_path.begin(), on_path.end());
    std::set_difference(sc.sets.inner_disc.begin(), sc.sets.inner_disc.end(),
                        on_path.begin(), on_path.end(),
                        std::back_inserter(disc_minus_path));
    std::vector<EdgeId> evicted;
    std::set_difference(base.edges.begin(), base.edges.end(), after_shift.edges.begin(),
                        after_shift.edges.end(), std::back_inserter(evicted));
    add("changes_confined_to_disc", subset_of(evicted, disc_minus_path),
        "MSF(kappa) \\ MSF(kappa'') is contained in D\\P");
  }

  // Finitely-many-changes bound at finite scale.
  {
    std::vector<EdgeId> delta;
    std::set_symmetric_difference(base.edges.begin(), base.edges.end(),
                                  after_shift.edges.begin(), after_shift.edges.end(),
                                  std::back_inserter(delta));
    bool ok = delta.size() <= 2 * disc_minus_path.size();
    std::ostringstream detail;
    detail << "|MSF(kappa) delta MSF(kappa'')| = " << delta.size() << " <= "
           << 2 * disc_minus_path.size();
    add("perturbation_bound", ok, detail.str());
  }

  // The open part of the forest survives transformation (2).
  {
    bool ok = true;
    for (EdgeId e : after_shift.edges)
      if (shifted.value(e) < p)
        ok = ok && final_forest.contains(e) && coupled.value(e) < p;
    add("open_forest_monotone", ok,
        "MSF(kappa'') ∩ kappa''_p is contained in MSF(kappa') ∩ kappa'_p");
  }

  // T, P and the far-side tree S all land inside one free tree of kappa'.
  Forest open_before = open_free_forest(g, lab, p);
  Forest open_shifted = open_free_forest(g, shifted, p);
  Forest open_after = open_free_forest(g, coupled, p);
  {
    const auto t_edges = tree_edge_set(open_before, g, sc.tracked_tree);
    const auto s_edges =
        tree_edge_set(open_shifted, g, open_shifted.component_of[sc.endpoint_k2]);
    bool ok = open_after.component_of[sc.endpoint_k1] ==
              open_after.component_of[sc.endpoint_k2];
    for (EdgeId e : t_edges) ok = ok && final_forest.contains(e) && open_after.contains(e);
    for (EdgeId e : s_edges) ok = ok && final_forest.contains(e) && open_after.contains(e);
    for (EdgeId e : sc.sets.path_edges) ok = ok && open_after.contains(e);
    std::ostringstream detail;
    detail << "T (" << t_edges.size() << " edges), P and S (" << s_edges.size()
           << " edges) lie in one tree of MSF(kappa') ∩ kappa'_p";
    add("merged_tree", ok, detail.str());
  }

  report.tracked_before = end_count_proxy(open_before, g, sc.tracked_tree, cut_radii);
  report.merged_after = end_count_proxy(
      open_after, g, open_after.component_of[sc.endpoint_k1], cut_radii);

  report.all_pass = true;
  for (const auto& a : report.assertions) report.all_pass = report.all_pass && a.pass;
  return report;
}

DemoCoupling demo_coupling() {
  // Two boundary-touching triangles at p = 0.5 joined by the 2-edge path
  // c-g-d; edge g-h is the only member of D\P.
  std::vector<Edge> edges = {
      {0, 1},  // a-b
      {1, 2},  // b-c
      {0, 2},  // a-c
      {3, 4},  // d-e
      {4, 5},  // e-f
      {3, 5},  // d-f
      {2, 6},  // c-g   (path)
      {6, 3},  // g-d   (path)
      {6, 7},  // g-h   (disc)
  };
  Graph g(8, std::move(edges), /*center=*/6, /*boundary=*/{0, 5}, "demo8", false);
  Labeling lab = Labeling::from_values(
      {0.10, 0.20, 0.30, 0.15, 0.25, 0.35, 0.70, 0.80, 0.40}, 0, "demo");
  return DemoCoupling{std::move(g), std::move(lab), {6, 7}, 0.5};
}

}  // namespace msflab
