#include "msflab/labels.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "msflab/rng.hpp"
#include "msflab/util.hpp"

namespace msflab {

namespace {

void check_threshold(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument(std::string(who) + ": threshold p must lie in (0,1)");
}

std::vector<char> edge_mask(std::span<const EdgeId> edges, EdgeId edge_count,
                            const char* who) {
  std::vector<char> mask(edge_count, 0);
  for (EdgeId e : edges) {
    if (e >= edge_count)
      throw std::invalid_argument(std::string(who) + ": edge id outside the host graph");
    mask[e] = 1;
  }
  return mask;
}

}  // namespace

Labeling Labeling::from_values(std::vector<double> values, std::uint64_t seed,
                               std::string provenance) {
  for (double v : values)
    if (!(v >= 0.0 && v < 1.0))
      throw std::invalid_argument("Labeling: labels must lie in [0,1)");
  return Labeling(std::move(values), seed, std::move(provenance));
}

Labeling sample_labels(const Graph& g, std::uint64_t seed) {
  std::vector<double> values(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) values[e] = rng::uniform(seed, e);
  return Labeling::from_values(std::move(values), seed, "sampled");
}

Labeling Labeling::shifted_up(std::span<const EdgeId> edges, double p) const {
  check_threshold(p, "shifted_up");
  auto mask = edge_mask(edges, edge_count(), "shifted_up");
  std::vector<double> values = values_;
  for (EdgeId e = 0; e < edge_count(); ++e)
    if (mask[e]) values[e] = p + (1.0 - p) * values[e];
  return Labeling(std::move(values), seed_, "transformed(shift_up of " + provenance_ + ")");
}

Labeling Labeling::scaled_down(std::span<const EdgeId> edges, double p) const {
  check_threshold(p, "scaled_down");
  auto mask = edge_mask(edges, edge_count(), "scaled_down");
  std::vector<double> values = values_;
  for (EdgeId e = 0; e < edge_count(); ++e)
    if (mask[e]) values[e] = p * values[e];
  return Labeling(std::move(values), seed_, "transformed(scale_down of " + provenance_ + ")");
}

Labeling Labeling::relabeled(const std::function<double(double)>& f) const {
  std::vector<double> values(edge_count());
  for (EdgeId e = 0; e < edge_count(); ++e) {
    values[e] = f(values_[e]);
    if (!(values[e] >= 0.0 && values[e] < 1.0))
      throw std::invalid_argument("relabeled: map left [0,1)");
  }
  // Inversion check over all value-adjacent pairs: strictly larger inputs
  // must map to strictly larger outputs.
  std::vector<EdgeId> order(edge_count());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](EdgeId x, EdgeId y) { return key(x) < key(y); });
  for (size_t i = 1; i < order.size(); ++i) {
    EdgeId lo = order[i - 1], hi = order[i];
    if (values_[lo] < values_[hi] && !(values[lo] < values[hi]))
      throw std::invalid_argument("relabeled: map is not strictly increasing");
  }
  return Labeling(std::move(values), seed_, "transformed(relabel of " + provenance_ + ")");
}

Labeling Labeling::replaced(EdgeId e, double value) const {
  if (e >= edge_count()) throw std::invalid_argument("replaced: edge id out of range");
  if (!(value >= 0.0 && value < 1.0))
    throw std::invalid_argument("replaced: label must lie in [0,1)");
  std::vector<double> values = values_;
  values[e] = value;
  return Labeling(std::move(values), seed_, "transformed(replace of " + provenance_ + ")");
}

std::vector<EdgeId> edges_below(const Labeling& lab, double p) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < lab.edge_count(); ++e)
    if (lab.value(e) < p) out.push_back(e);
  return out;
}

std::vector<EdgeId> edges_by_key(const Labeling& lab) {
  std::vector<EdgeId> order(lab.edge_count());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](EdgeId x, EdgeId y) { return lab.key(x) < lab.key(y); });
  return order;
}

std::vector<VertexId> path_vertices(const Graph& g, std::span<const EdgeId> path) {
  if (path.empty()) throw std::invalid_argument("path_vertices: empty path");
  for (EdgeId e : path)
    if (e >= g.edge_count())
      throw std::invalid_argument("path_vertices: edge id outside the host graph");

  std::vector<VertexId> seq;
  if (path.size() == 1) {
    seq = {g.edge(path[0]).a, g.edge(path[0]).b};
  } else {
    const Edge& first = g.edge(path[0]);
    const Edge& second = g.edge(path[1]);
    VertexId start;
    if (first.b == second.a || first.b == second.b)
      start = first.a;
    else if (first.a == second.a || first.a == second.b)
      start = first.b;
    else
      throw std::invalid_argument("path_vertices: edges 0 and 1 do not meet");
    seq.push_back(start);
    VertexId at = start;
    for (EdgeId e : path) {
      const Edge& ed = g.edge(e);
      if (ed.a == at)
        at = ed.b;
      else if (ed.b == at)
        at = ed.a;
      else
        throw std::invalid_argument("path_vertices: edges are not consecutive");
      seq.push_back(at);
    }
  }
  std::vector<VertexId> sorted = seq;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("path_vertices: path is not simple");
  return seq;
}

ScenarioEdgeSets make_scenario_edge_sets(const Graph& g, std::vector<EdgeId> path,
                                         double p) {
  check_threshold(p, "make_scenario_edge_sets");
  auto seq = path_vertices(g, path);

  // D = every edge incident to an inner vertex of P
  std::vector<char> seen(g.edge_count(), 0);
  std::vector<EdgeId> disc;
  for (size_t i = 1; i + 1 < seq.size(); ++i)
    for (EdgeId e : g.incident(seq[i]))
      if (!seen[e]) {
        seen[e] = 1;
        disc.push_back(e);
      }
  std::sort(disc.begin(), disc.end());
  return ScenarioEdgeSets{std::move(path), std::move(disc), p};
}

std::string write_labeling(const Labeling& lab) {
  std::ostringstream out;
  out << "seed " << lab.seed() << "\n";
  for (EdgeId e = 0; e < lab.edge_count(); ++e)
    out << e << " " << format_g17(lab.value(e)) << "\n";
  return out.str();
}

Labeling read_labeling(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  if (!(in >> word) || word != "seed")
    throw std::invalid_argument("read_labeling: expected 'seed'");
  std::uint64_t seed;
  if (!(in >> seed)) throw std::invalid_argument("read_labeling: bad seed");
  std::vector<double> values;
  EdgeId id;
  while (in >> id) {
    if (id != values.size())
      throw std::invalid_argument("read_labeling: edge ids must be dense and ordered");
    std::string num;
    if (!(in >> num)) throw std::invalid_argument("read_labeling: truncated line");
    values.push_back(parse_double(num));
  }
  return Labeling::from_values(std::move(values), seed, "imported");
}

}  // namespace msflab
