#include "msflab/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "msflab/util.hpp"

namespace msflab {

namespace {

constexpr std::uint64_t kMaxVertices = 1u << 26;
constexpr std::uint64_t kMaxEdges = 1u << 27;

void check_budget(std::uint64_t vertices, std::uint64_t edges, const char* who) {
  if (vertices > kMaxVertices || edges > kMaxEdges) {
    throw std::invalid_argument(std::string(who) +
                                ": requested size exceeds the memory budget");
  }
}

}  // namespace

Graph::Graph(VertexId vertex_count, std::vector<Edge> edges, VertexId center,
             std::vector<VertexId> boundary, std::string family_tag,
             bool vertex_transitive_host)
    : vertex_count_(vertex_count),
      edges_(std::move(edges)),
      center_(center),
      boundary_(std::move(boundary)),
      family_tag_(std::move(family_tag)),
      transitive_host_(vertex_transitive_host) {
  if (center_ >= vertex_count_) throw std::invalid_argument("Graph: center out of range");
  adjacency_.resize(vertex_count_);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.a >= vertex_count_ || ed.b >= vertex_count_)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (ed.a == ed.b) throw std::invalid_argument("Graph: self-loops are not allowed");
    adjacency_[ed.a].push_back(e);
    adjacency_[ed.b].push_back(e);
  }
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  boundary_mask_.assign(vertex_count_, 0);
  for (VertexId b : boundary_) {
    if (b >= vertex_count_) throw std::invalid_argument("Graph: boundary vertex out of range");
    boundary_mask_[b] = 1;
  }
}

Graph gen_tree_ball(unsigned degree, unsigned radius) {
  if (degree < 3) throw std::invalid_argument("gen_tree_ball: degree must be >= 3");
  if (radius < 1) throw std::invalid_argument("gen_tree_ball: radius must be >= 1");

  std::uint64_t count = 1, level = degree;
  for (unsigned d = 1; d <= radius; ++d) {
    count += level;
    check_budget(count, count, "gen_tree_ball");
    level *= degree - 1;
  }

  std::vector<Edge> edges;
  edges.reserve(count - 1);
  std::vector<VertexId> prev{0};
  VertexId next = 1;
  for (unsigned depth = 1; depth <= radius; ++depth) {
    std::vector<VertexId> cur;
    unsigned children = depth == 1 ? degree : degree - 1;
    cur.reserve(prev.size() * children);
    for (VertexId parent : prev) {
      for (unsigned c = 0; c < children; ++c) {
        edges.push_back(Edge{parent, next});
        cur.push_back(next);
        ++next;
      }
    }
    prev = std::move(cur);
  }

  std::ostringstream tag;
  tag << "tree:" << degree << ":" << radius;
  return Graph(next, std::move(edges), 0, std::move(prev), tag.str(), true);
}

Graph gen_grid(unsigned width, unsigned height, bool wrap) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("gen_grid: width and height must be >= 2");
  check_budget(std::uint64_t(width) * height, 2ull * width * height, "gen_grid");

  const auto id = [width](unsigned x, unsigned y) {
    return static_cast<VertexId>(y * width + x);
  };

  std::vector<Edge> edges;
  for (unsigned y = 0; y < height; ++y) {
    for (unsigned x = 0; x < width; ++x) {
      if (wrap || x + 1 < width) edges.push_back(Edge{id(x, y), id((x + 1) % width, y)});
      if (wrap || y + 1 < height) edges.push_back(Edge{id(x, y), id(x, (y + 1) % height)});
    }
  }

  std::vector<VertexId> boundary;
  if (!wrap) {
    for (unsigned y = 0; y < height; ++y)
      for (unsigned x = 0; x < width; ++x)
        if (x == 0 || y == 0 || x + 1 == width || y + 1 == height)
          boundary.push_back(id(x, y));
  }

  VertexId center = id((width - 1) / 2, (height - 1) / 2);
  std::ostringstream tag;
  tag << "grid:" << width << ":" << height << ":" << (wrap ? "torus" : "box");
  return Graph(width * height, std::move(edges), center, std::move(boundary), tag.str(), true);
}

Graph gen_cycle(unsigned length) {
  if (length < 3) throw std::invalid_argument("gen_cycle: length must be >= 3");
  check_budget(length, length, "gen_cycle");
  std::vector<Edge> edges;
  edges.reserve(length);
  for (unsigned i = 0; i < length; ++i)
    edges.push_back(Edge{i, (i + 1) % length});
  std::ostringstream tag;
  tag << "cycle:" << length;
  return Graph(length, std::move(edges), 0, {}, tag.str(), true);
}

Graph gen_tree_cycle_product(unsigned degree, unsigned radius, unsigned cycle_len) {
  if (cycle_len < 3)
    throw std::invalid_argument("gen_tree_cycle_product: cycle length must be >= 3");
  if (degree < 3 || radius < 1)
    throw std::invalid_argument("gen_tree_cycle_product: tree factor wants degree >= 3, radius >= 1");

  // budget the product before building even the tree factor
  std::uint64_t tree_vertices = 1, sphere = degree;
  for (unsigned d = 1; d <= radius; ++d) {
    tree_vertices += sphere;
    check_budget(tree_vertices * cycle_len, 2 * tree_vertices * cycle_len,
                 "gen_tree_cycle_product");
    sphere *= degree - 1;
  }

  Graph tree = gen_tree_ball(degree, radius);
  const std::uint64_t n = std::uint64_t(tree.vertex_count()) * cycle_len;
  const std::uint64_t m =
      std::uint64_t(tree.edge_count()) * cycle_len + std::uint64_t(tree.vertex_count()) * cycle_len;
  check_budget(n, m, "gen_tree_cycle_product");

  const auto id = [cycle_len](VertexId t, unsigned j) {
    return static_cast<VertexId>(t * cycle_len + j);
  };

  std::vector<Edge> edges;
  edges.reserve(m);
  // tree-layer copies first, then the cycle fibres; both in host id order
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    for (unsigned j = 0; j < cycle_len; ++j)
      edges.push_back(Edge{id(tree.edge(e).a, j), id(tree.edge(e).b, j)});
  for (VertexId t = 0; t < tree.vertex_count(); ++t)
    for (unsigned j = 0; j < cycle_len; ++j)
      edges.push_back(Edge{id(t, j), id(t, (j + 1) % cycle_len)});

  std::vector<VertexId> boundary;
  boundary.reserve(tree.boundary().size() * cycle_len);
  for (VertexId t : tree.boundary())
    for (unsigned j = 0; j < cycle_len; ++j) boundary.push_back(id(t, j));

  std::ostringstream tag;
  tag << "treecycle:" << degree << ":" << radius << ":" << cycle_len;
  return Graph(static_cast<VertexId>(n), std::move(edges), id(tree.center(), 0),
               std::move(boundary), tag.str(), true);
}

std::pair<Graph, ContractionMap> contract_boundary(const Graph& g) {
  if (!g.has_boundary())
    throw std::invalid_argument(
        "contract_boundary: empty boundary; use the free computation instead");

  ContractionMap map;
  map.vertex_map.resize(g.vertex_count());
  VertexId next = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!g.is_boundary(v)) map.vertex_map[v] = next++;
  map.contracted_vertex = next;
  for (VertexId b : g.boundary()) map.vertex_map[b] = map.contracted_vertex;

  std::vector<Edge> edges;
  map.surviving_edges.assign(g.edge_count(), kNoEdge);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    VertexId ia = map.vertex_map[g.edge(e).a];
    VertexId ib = map.vertex_map[g.edge(e).b];
    if (ia == ib) continue;  // boundary-boundary edge: would be a self-loop
    map.surviving_edges[e] = static_cast<EdgeId>(edges.size());
    map.preimage.push_back(e);
    edges.push_back(Edge{ia, ib});
  }

  Graph image(next + 1, std::move(edges), map.vertex_map[g.center()],
              {map.contracted_vertex}, "contracted(" + g.family_tag() + ")", false);
  return {std::move(image), std::move(map)};
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source) {
  if (source >= g.vertex_count())
    throw std::invalid_argument("bfs_distances: source out of range");
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(v)) {
      VertexId u = g.other_end(e, v);
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

std::uint32_t graph_radius(const Graph& g) {
  auto dist = bfs_distances(g, g.center());
  std::uint32_t r = 0;
  for (std::uint32_t d : dist)
    if (d != kUnreachable && d > r) r = d;
  return r;
}

std::string write_graph(const Graph& g) {
  std::ostringstream out;
  out << "vertices " << g.vertex_count() << " center " << g.center() << " boundary "
      << g.boundary().size() << ":";
  for (VertexId b : g.boundary()) out << " " << b;
  out << "\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << e << " " << g.edge(e).a << " " << g.edge(e).b << "\n";
  return out.str();
}

Graph read_graph(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  auto expect = [&](const char* token) {
    if (!(in >> word) || word != token)
      throw std::invalid_argument(std::string("read_graph: expected '") + token + "'");
  };

  expect("vertices");
  VertexId n;
  if (!(in >> n)) throw std::invalid_argument("read_graph: bad vertex count");
  expect("center");
  VertexId center;
  if (!(in >> center)) throw std::invalid_argument("read_graph: bad center");
  if (!(in >> word) || word != "boundary")
    throw std::invalid_argument("read_graph: expected 'boundary'");
  std::string count_tok;
  if (!(in >> count_tok) || count_tok.empty() || count_tok.back() != ':')
    throw std::invalid_argument("read_graph: expected 'k:' boundary count");
  std::uint32_t k = parse_u32(count_tok.substr(0, count_tok.size() - 1));
  std::vector<VertexId> boundary(k);
  for (std::uint32_t i = 0; i < k; ++i)
    if (!(in >> boundary[i])) throw std::invalid_argument("read_graph: short boundary list");

  std::vector<Edge> edges;
  EdgeId id;
  while (in >> id) {
    Edge e{};
    if (!(in >> e.a >> e.b)) throw std::invalid_argument("read_graph: truncated edge line");
    if (id != edges.size())
      throw std::invalid_argument("read_graph: edge ids must be dense and ordered");
    edges.push_back(e);
  }
  return Graph(n, std::move(edges), center, std::move(boundary), "imported", false);
}

bool same_structure(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.center() != b.center() || a.boundary() != b.boundary())
    return false;
  for (EdgeId e = 0; e < a.edge_count(); ++e)
    if (a.edge(e).a != b.edge(e).a || a.edge(e).b != b.edge(e).b) return false;
  return true;
}

}  // namespace msflab
