#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>

#include "msflab/mtp.hpp"
#include "msflab/rng.hpp"

using namespace msflab;

TEST_CASE("clockwise rule on the cycle") {
  auto g = gen_cycle(10);
  auto rep = mtp_check(g, find_transport_rule("unit_clockwise"), 5, 1, 1e-12);
  CHECK(rep.mean_out == 1.0);
  CHECK(rep.mean_in == 1.0);
  CHECK(rep.max_abs_gap == 0.0);
  CHECK(rep.within_tolerance);
}

TEST_CASE("zero rule") {
  auto g = gen_cycle(10);
  auto rep = mtp_check(g, find_transport_rule("zero"), 3, 1, 1e-12);
  CHECK(rep.mean_out == 0.0);
  CHECK(rep.mean_in == 0.0);
}

TEST_CASE("builtin rules balance exactly on torus and cycle") {
  for (const auto& host : {gen_cycle(10), gen_grid(8, 8, true)}) {
    for (const TransportRule& rule : builtin_transport_rules()) {
      auto rep = mtp_check(host, rule, 20, 77, 1e-12);
      INFO(rule.name, " on ", host.family_tag());
      CHECK(rep.max_abs_gap <= 1e-12);
      CHECK(rep.within_tolerance);
      CHECK(rep.mean_out >= 0.0);
      CHECK(rep.mean_in >= 0.0);
    }
  }
}

TEST_CASE("scaling a rule scales both means") {
  auto g = gen_grid(6, 6, true);
  const TransportRule& base = find_transport_rule("edge_label_to_neighbors");
  const double c = 3.5;
  TransportRule scaled{"scaled", base.locality_radius,
                       [&](const Graph& gg, const Labeling& lab, VertexId a, VertexId b) {
                         return c * base.mass(gg, lab, a, b);
                       }};
  auto rb = mtp_check(g, base, 4, 5, 1e-9);
  auto rs = mtp_check(g, scaled, 4, 5, 1e-9);
  CHECK(rs.mean_out == doctest::Approx(c * rb.mean_out).epsilon(1e-12));
  CHECK(rs.mean_in == doctest::Approx(c * rb.mean_in).epsilon(1e-12));
}

TEST_CASE("hosts with boundary are rejected") {
  auto g = gen_tree_ball(3, 2);
  CHECK_THROWS_AS(mtp_check(g, builtin_transport_rules()[0], 1, 0, 1e-12),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_transport_rule("no_such_rule"), std::invalid_argument);
}

TEST_CASE("builtin rules are equivariant under host automorphisms") {
  // translation automorphism of the torus: (x,y) -> (x+1, y)
  auto g = gen_grid(5, 4, true);
  const unsigned w = 5;
  auto sigma_v =
      [w](VertexId v) { return static_cast<VertexId>((v / w) * w + (v % w + 1) % w); };

  // edge image lookup: no parallel edges at these sizes, endpoints identify it
  std::map<std::pair<VertexId, VertexId>, EdgeId> by_ends;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto a = g.edge(e).a, b = g.edge(e).b;
    by_ends[{std::min(a, b), std::max(a, b)}] = e;
  }
  auto sigma_e = [&](EdgeId e) {
    auto a = sigma_v(g.edge(e).a), b = sigma_v(g.edge(e).b);
    return by_ends.at({std::min(a, b), std::max(a, b)});
  };

  auto lab = sample_labels(g, 31);
  // permuted labeling: label'(sigma e) = label(e)
  std::vector<double> permuted(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) permuted[sigma_e(e)] = lab.value(e);
  auto lab2 = Labeling::from_values(permuted, 0, "permuted");

  // distinct sampled labels keep min_label_neighbor free of id tie-breaks,
  // so all three builtins must commute with the automorphism exactly
  for (const char* name : {"min_label_neighbor", "edge_label_to_neighbors", "uniform_split"}) {
    const TransportRule& rule = find_transport_rule(name);
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      for (VertexId y = 0; y < g.vertex_count(); ++y) {
        if (x == y) continue;
        INFO(name, " pair ", x, "->", y);
        CHECK(rule.mass(g, lab, x, y) ==
              doctest::Approx(rule.mass(g, lab2, sigma_v(x), sigma_v(y))).epsilon(1e-15));
      }
  }
}
