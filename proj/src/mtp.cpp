#include "msflab/mtp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "msflab/rng.hpp"
#include "msflab/util.hpp"

namespace msflab {

MtpReport mtp_check(const Graph& g, const TransportRule& rule,
                    std::uint32_t replicates, std::uint64_t seed, double tolerance) {
  if (g.has_boundary())
    throw std::invalid_argument(
        "mtp_check: host must have empty boundary (torus/cycle families)");
  if (!g.is_vertex_transitive_host())
    throw std::invalid_argument("mtp_check: host must be vertex-transitive");
  if (replicates < 1) throw std::invalid_argument("mtp_check: replicates must be >= 1");

  const std::uint32_t n = g.vertex_count();
  std::vector<double> out_means(replicates), in_means(replicates), gaps(replicates);

  parallel_for(replicates, [&](std::uint32_t r) {
    Labeling lab = sample_labels(g, rng::child_seed(seed, r));
    // Row sums and column sums of the same mass matrix, accumulated in
    // different orders: equal totals up to floating-point summation error.
    std::vector<double> sent(n), received(n);
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (VertexId u = 0; u < n; ++u)
        if (u != v) s += rule.mass(g, lab, v, u);
      sent[v] = s;
    }
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (VertexId u = 0; u < n; ++u)
        if (u != v) s += rule.mass(g, lab, u, v);
      received[v] = s;
    }
    double total_out = pairwise_sum(sent);
    double total_in = pairwise_sum(received);
    out_means[r] = total_out / n;
    in_means[r] = total_in / n;
    gaps[r] = std::abs(total_out - total_in);
  });

  MtpReport rep;
  rep.rule_name = rule.name;
  rep.replicates = replicates;
  rep.tolerance = tolerance;
  const double R = static_cast<double>(replicates);
  rep.mean_out = pairwise_sum(out_means) / R;
  rep.mean_in = pairwise_sum(in_means) / R;
  for (double gap : gaps) rep.max_abs_gap = std::max(rep.max_abs_gap, gap);

  auto sample_se = [R, replicates](std::span<const double> xs, double mean) {
    if (replicates < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (R - 1.0) / R);
  };
  rep.mean_out_se = sample_se(out_means, rep.mean_out);
  rep.mean_in_se = sample_se(in_means, rep.mean_in);
  rep.within_tolerance = std::abs(rep.mean_out - rep.mean_in) <= tolerance;
  return rep;
}

namespace {

// Mass 1 to the far end of the minimum-key incident edge.
double min_label_neighbor(const Graph& g, const Labeling& lab, VertexId from,
                          VertexId to) {
  auto inc = g.incident(from);
  if (inc.empty()) return 0.0;
  EdgeId best = inc[0];
  for (EdgeId e : inc)
    if (lab.key(e) < lab.key(best)) best = e;
  return g.other_end(best, from) == to ? 1.0 : 0.0;
}

// Each incident edge carries its label to the opposite endpoint.
double edge_label_to_neighbors(const Graph& g, const Labeling& lab, VertexId from,
                               VertexId to) {
  double mass = 0.0;
  for (EdgeId e : g.incident(from))
    if (g.other_end(e, from) == to) mass += lab.value(e);
  return mass;
}

// Unit mass split evenly over the incident edges.
double uniform_split(const Graph& g, const Labeling&, VertexId from, VertexId to) {
  auto inc = g.incident(from);
  if (inc.empty()) return 0.0;
  double mass = 0.0;
  for (EdgeId e : inc)
    if (g.other_end(e, from) == to) mass += 1.0;
  return mass / static_cast<double>(inc.size());
}

// Mass 1 to vertex id + 1 (mod n): the clockwise neighbor on cycle hosts.
double unit_clockwise(const Graph& g, const Labeling&, VertexId from, VertexId to) {
  return (from + 1) % g.vertex_count() == to ? 1.0 : 0.0;
}

double zero_rule(const Graph&, const Labeling&, VertexId, VertexId) { return 0.0; }

}  // namespace

const std::vector<TransportRule>& builtin_transport_rules() {
  static const std::vector<TransportRule> rules = {
      {"min_label_neighbor", 1, min_label_neighbor},
      {"edge_label_to_neighbors", 1, edge_label_to_neighbors},
      {"uniform_split", 1, uniform_split},
  };
  return rules;
}

const TransportRule& find_transport_rule(const std::string& name) {
  for (const TransportRule& r : builtin_transport_rules())
    if (r.name == name) return r;
  static const TransportRule clockwise{"unit_clockwise", 1, unit_clockwise};
  static const TransportRule zero{"zero", 0, zero_rule};
  if (name == clockwise.name) return clockwise;
  if (name == zero.name) return zero;
  throw std::invalid_argument("unknown transport rule: " + name);
}

std::string mtp_csv(std::span<const MtpReport> reports) {
  std::ostringstream out;
  out << "rule_name,replicates,mean_out,mean_in,max_abs_gap\n";
  for (const MtpReport& r : reports)
    out << r.rule_name << "," << r.replicates << "," << format_g17(r.mean_out) << ","
        << format_g17(r.mean_in) << "," << format_g17(r.max_abs_gap) << "\n";
  return out.str();
}

}  // namespace msflab
