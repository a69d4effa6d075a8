#include "msflab/msf.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "msflab/union_find.hpp"

namespace msflab {

namespace {

void check_labeling(const Graph& g, const Labeling& lab, const char* who) {
  if (lab.edge_count() != g.edge_count())
    throw std::invalid_argument(std::string(who) +
                                ": labeling does not match the graph's edge set");
}

// Dense component ids in order of first vertex occurrence.
std::pair<std::vector<std::uint32_t>, std::uint32_t> normalize_components(
    DisjointSets& sets, std::uint32_t n) {
  std::vector<std::uint32_t> comp(n);
  std::vector<std::uint32_t> rename(n, 0xffffffffu);
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t root = sets.find(v);
    if (rename[root] == 0xffffffffu) rename[root] = next++;
    comp[v] = rename[root];
  }
  return {std::move(comp), next};
}

}  // namespace

bool Forest::contains(EdgeId e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

Forest make_forest(const Graph& g, std::vector<EdgeId> edge_set) {
  std::sort(edge_set.begin(), edge_set.end());
  if (std::adjacent_find(edge_set.begin(), edge_set.end()) != edge_set.end())
    throw std::invalid_argument("make_forest: duplicate edge id");
  DisjointSets sets(g.vertex_count());
  for (EdgeId e : edge_set) {
    if (e >= g.edge_count()) throw std::invalid_argument("make_forest: unknown edge id");
    if (!sets.unite(g.edge(e).a, g.edge(e).b))
      throw std::invalid_argument("make_forest: edge set contains a cycle");
  }
  Forest f;
  f.edges = std::move(edge_set);
  auto [comp, count] = normalize_components(sets, g.vertex_count());
  f.component_of = std::move(comp);
  f.tree_count = count;
  return f;
}

TracedForest mst_kruskal_traced(const Graph& g, const Labeling& lab) {
  check_labeling(g, lab, "mst_kruskal");
  std::vector<EdgeId> order = edges_by_key(lab);
  DisjointSets sets(g.vertex_count());
  TracedForest out;
  for (EdgeId e : order) {
    std::uint32_t ra = sets.find(g.edge(e).a);
    std::uint32_t rb = sets.find(g.edge(e).b);
    if (ra == rb) continue;
    sets.unite(ra, rb);
    out.forest.edges.push_back(e);
    out.trace.push_back(MergeRecord{lab.value(e), e, ra, rb});
  }
  std::sort(out.forest.edges.begin(), out.forest.edges.end());
  auto [comp, count] = normalize_components(sets, g.vertex_count());
  out.forest.component_of = std::move(comp);
  out.forest.tree_count = count;
  return out;
}

Forest mst_kruskal(const Graph& g, const Labeling& lab) {
  return mst_kruskal_traced(g, lab).forest;
}

bool cycle_max_oracle(const Graph& g, const Labeling& lab, EdgeId e) {
  check_labeling(g, lab, "cycle_max_oracle");
  if (e >= g.edge_count())
    throw std::invalid_argument("cycle_max_oracle: unknown edge");
  // e is in the forest iff its endpoints are not connected using only edges
  // of strictly smaller key (order-equivalent form of the cycle criterion).
  const EdgeKey limit = lab.key(e);
  const VertexId src = g.edge(e).a, dst = g.edge(e).b;
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<VertexId> queue{src};
  seen[src] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId f : g.incident(v)) {
      if (!(lab.key(f) < limit)) continue;
      VertexId u = g.other_end(f, v);
      if (seen[u]) continue;
      if (u == dst) return false;
      seen[u] = 1;
      queue.push_back(u);
    }
  }
  return true;
}

Forest wired_msf(const Graph& g, const Labeling& lab) {
  check_labeling(g, lab, "wired_msf");
  if (!g.has_boundary())
    throw std::invalid_argument("wired_msf: empty boundary; use mst_kruskal (free) instead");
  auto [image, map] = contract_boundary(g);
  std::vector<double> values(image.edge_count());
  for (EdgeId ie = 0; ie < image.edge_count(); ++ie)
    values[ie] = lab.value(map.preimage[ie]);
  // Tie-break caveat: image edge ids are order-preserving in the originals,
  // so equal labels break ties identically before and after contraction.
  Labeling pushed = Labeling::from_values(std::move(values), lab.seed(),
                                          "contracted(" + lab.provenance() + ")");
  Forest image_msf = mst_kruskal(image, pushed);
  std::vector<EdgeId> pulled;
  pulled.reserve(image_msf.edges.size());
  for (EdgeId ie : image_msf.edges) pulled.push_back(map.preimage[ie]);
  return make_forest(g, std::move(pulled));
}

Forest invasion_tree(const Graph& g, const Labeling& lab, VertexId source,
                     bool stop_at_boundary) {
  check_labeling(g, lab, "invasion_tree");
  if (source >= g.vertex_count())
    throw std::invalid_argument("invasion_tree: unknown source vertex");

  struct Frontier {
    EdgeKey key;
    EdgeId edge;
    bool operator>(const Frontier& o) const { return o.key < key; }
  };
  std::priority_queue<Frontier, std::vector<Frontier>, std::greater<Frontier>> heap;
  std::vector<char> invaded(g.vertex_count(), 0);
  std::vector<EdgeId> taken;

  auto absorb = [&](VertexId v) {
    invaded[v] = 1;
    for (EdgeId e : g.incident(v)) heap.push(Frontier{lab.key(e), e});
  };

  if (!(stop_at_boundary && g.is_boundary(source))) {
    absorb(source);
    while (!heap.empty()) {
      EdgeId e = heap.top().edge;
      heap.pop();
      const Edge& ed = g.edge(e);
      VertexId fresh;
      if (!invaded[ed.a])
        fresh = ed.a;
      else if (!invaded[ed.b])
        fresh = ed.b;
      else
        continue;  // lazy deletion: both ends already inside
      taken.push_back(e);
      if (stop_at_boundary && g.is_boundary(fresh)) {
        invaded[fresh] = 1;
        break;
      }
      absorb(fresh);
    }
  }
  return make_forest(g, std::move(taken));
}

namespace {

struct BruteBest {
  double sum = 0.0;
  std::vector<EdgeKey> keys;  // sorted ascending
  bool set = false;
};

bool better(double sum, const std::vector<EdgeKey>& keys, const BruteBest& best) {
  if (!best.set) return true;
  if (sum != best.sum) return sum < best.sum;
  return std::lexicographical_compare(keys.begin(), keys.end(), best.keys.begin(),
                                      best.keys.end());
}

void enumerate_forests(const Graph& g, const Labeling& lab, EdgeId idx,
                       std::uint32_t need, DisjointSets sets,
                       std::vector<EdgeId>& chosen, BruteBest& best) {
  if (need == 0) {
    double sum = 0.0;
    std::vector<EdgeKey> keys;
    keys.reserve(chosen.size());
    for (EdgeId e : chosen) {
      sum += lab.value(e);
      keys.push_back(lab.key(e));
    }
    std::sort(keys.begin(), keys.end());
    if (better(sum, keys, best)) {
      best.set = true;
      best.sum = sum;
      best.keys = std::move(keys);
    }
    return;
  }
  if (g.edge_count() - idx < need) return;

  const Edge& ed = g.edge(idx);
  if (sets.find(ed.a) != sets.find(ed.b)) {
    DisjointSets with = sets;
    with.unite(ed.a, ed.b);
    chosen.push_back(idx);
    enumerate_forests(g, lab, idx + 1, need - 1, std::move(with), chosen, best);
    chosen.pop_back();
  }
  enumerate_forests(g, lab, idx + 1, need, std::move(sets), chosen, best);
}

}  // namespace

Forest brute_force_msf(const Graph& g, const Labeling& lab) {
  check_labeling(g, lab, "brute_force_msf");
  if (g.vertex_count() > 12 || g.edge_count() > 25)
    throw std::invalid_argument(
        "brute_force_msf: guarded to <= 12 vertices and <= 25 edges");

  DisjointSets conn(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) conn.unite(g.edge(e).a, g.edge(e).b);
  std::uint32_t components = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (conn.find(v) == v) ++components;
  const std::uint32_t need = g.vertex_count() - components;

  BruteBest best;
  std::vector<EdgeId> chosen;
  enumerate_forests(g, lab, 0, need, DisjointSets(g.vertex_count()), chosen, best);

  std::vector<EdgeId> edges;
  edges.reserve(best.keys.size());
  for (const EdgeKey& k : best.keys) edges.push_back(k.edge);
  return make_forest(g, std::move(edges));
}

std::uint32_t perturbation_delta(const Graph& g, const Labeling& a,
                                 const Labeling& b) {
  if (a.edge_count() != b.edge_count() || a.edge_count() != g.edge_count())
    throw std::invalid_argument("perturbation_delta: labelings live on different graphs");
  Forest fa = mst_kruskal(g, a);
  Forest fb = mst_kruskal(g, b);
  std::vector<EdgeId> diff;
  std::set_symmetric_difference(fa.edges.begin(), fa.edges.end(), fb.edges.begin(),
                                fb.edges.end(), std::back_inserter(diff));
  return static_cast<std::uint32_t>(diff.size());
}

std::string write_forest(const Forest& f) {
  std::ostringstream out;
  out << "tree_count " << f.tree_count << "\n";
  for (EdgeId e : f.edges) out << e << "\n";
  return out.str();
}

}  // namespace msflab
