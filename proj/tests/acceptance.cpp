// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "msflab/ends.hpp"
#include "msflab/harness.hpp"
#include "msflab/msf.hpp"
#include "msflab/mtp.hpp"
#include "msflab/percolation.hpp"
#include "msflab/rng.hpp"
#include "msflab/union_find.hpp"
#include "msflab/util.hpp"

using namespace msflab;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int index, std::string name)
      : index_(index), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail) {
    if (!ok && first_failure_.empty()) first_failure_ = detail;
    ok_ = ok_ && ok;
  }

  ~Criterion() {
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", ok_ ? "PASS" : "FAIL", index_,
                name_.c_str(), secs, first_failure_.empty() ? "" : " -- ",
                first_failure_.c_str());
    std::fflush(stdout);
    if (!ok_) ++g_failures;
  }

 private:
  int index_;
  std::string name_;
  bool ok_ = true;
  std::string first_failure_;
  std::chrono::steady_clock::time_point start_;
};

Graph random_connected_graph(std::uint64_t seed, std::uint32_t n, std::uint32_t extra) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    auto parent = static_cast<VertexId>(rng::hash_pair(seed, v) % v);
    edges.push_back(Edge{parent, v});
  }
  for (std::uint32_t i = 0; i < extra; ++i) {
    auto a = static_cast<VertexId>(rng::hash_pair(seed ^ 0xc0ffee, 2 * i) % n);
    auto b = static_cast<VertexId>(rng::hash_pair(seed ^ 0xc0ffee, 2 * i + 1) % n);
    if (a == b) b = (b + 1) % n;
    edges.push_back(Edge{a, b});
  }
  return Graph(n, std::move(edges), 0, {}, "corpus", false);
}

// --- criterion 1 -----------------------------------------------------------

void criterion_finite_identities() {
  Criterion c(1, "finite-graph identity suite: kruskal = brute force = invasion, "
                 "oracle agrees edgewise");
  int graphs = 0;
  for (std::uint64_t gi = 0; gi < 200; ++gi) {
    std::uint32_t n = 2 + gi % 11;                       // 2..12 vertices
    std::uint32_t extra = gi % 10 == 9 ? 8 : gi % 6;     // up to 19 edges
    Graph g = random_connected_graph(rng::child_seed(101, gi), n, extra);
    ++graphs;
    for (std::uint64_t li = 0; li < 5; ++li) {
      Labeling lab = sample_labels(g, rng::child_seed(gi * 7 + 3, li));
      Forest kru = mst_kruskal(g, lab);
      c.check(brute_force_msf(g, lab).edges == kru.edges, "brute force != kruskal");
      VertexId src = static_cast<VertexId>((gi + li) % g.vertex_count());
      c.check(invasion_tree(g, lab, src, false).edges == kru.edges,
              "invasion to completion != kruskal");
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        c.check(cycle_max_oracle(g, lab, e) == kru.contains(e),
                "cycle-max oracle disagrees with kruskal");
    }
  }
  c.check(graphs >= 200, "corpus too small");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_wired_subset() {
  Criterion c(2, "wired forest is contained in the free forest on every host");
  std::vector<Graph> hosts;
  for (unsigned r = 1; r <= 10; ++r) hosts.push_back(gen_tree_ball(3, r));
  for (unsigned n : {4u, 8u, 16u, 32u}) hosts.push_back(gen_grid(n, n, false));
  for (unsigned r : {2u, 3u, 4u}) hosts.push_back(gen_tree_cycle_product(3, r, 3));

  for (size_t h = 0; h < hosts.size(); ++h) {
    const Graph& g = hosts[h];
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      Labeling lab = sample_labels(g, rng::child_seed(200 + h, rep));
      Forest wired = wired_msf(g, lab);
      Forest free_forest = mst_kruskal(g, lab);
      c.check(std::includes(free_forest.edges.begin(), free_forest.edges.end(),
                            wired.edges.begin(), wired.edges.end()),
              "wired edge escaped the free forest on " + g.family_tag());
    }
  }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_tree_triviality() {
  Criterion c(3, "free forest on tree hosts is the whole edge set");
  for (unsigned d : {3u, 4u}) {
    for (unsigned r = 1; r <= (d == 3 ? 8u : 5u); ++r) {
      Graph g = gen_tree_ball(d, r);
      for (std::uint64_t rep = 0; rep < 100; ++rep) {
        Labeling lab = sample_labels(g, rng::child_seed(300 + d * 16 + r, rep));
        c.check(mst_kruskal(g, lab).edges.size() == g.edge_count(),
                "tree host free forest missed an edge");
      }
    }
  }
}

// --- criterion 4 -----------------------------------------------------------

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe density_stats(const Graph& g, std::uint64_t seed, std::uint32_t replicates) {
  std::vector<double> densities(replicates);
  parallel_for(replicates, [&](std::uint32_t r) {
    densities[r] = msf_compare(g, sample_labels(g, rng::child_seed(seed, r))).density;
  });
  MeanSe out;
  out.mean = pairwise_sum(densities) / replicates;
  double ss = 0.0;
  for (double d : densities) ss += (d - out.mean) * (d - out.mean);
  out.se = std::sqrt(ss / (replicates - 1.0) / replicates);
  return out;
}

void criterion_amenable_convergence() {
  Criterion c(4, "free/wired disagreement density on boxes falls from n=16 to n=64");
  const std::uint32_t reps = 400;
  MeanSe d16 = density_stats(gen_grid(16, 16, false), 4016, reps);
  MeanSe d32 = density_stats(gen_grid(32, 32, false), 4032, reps);
  MeanSe d64 = density_stats(gen_grid(64, 64, false), 4064, reps);

  auto gap_ok = [](const MeanSe& hi, const MeanSe& lo) {
    return hi.mean - lo.mean > 2.0 * std::sqrt(hi.se * hi.se + lo.se * lo.se);
  };
  std::ostringstream detail;
  detail << "means " << d16.mean << " > " << d32.mean << " > " << d64.mean;
  c.check(gap_ok(d16, d32), "16 vs 32 gap below 2 combined SE: " + detail.str());
  c.check(gap_ok(d32, d64), "32 vs 64 gap below 2 combined SE: " + detail.str());
}

// --- criterion 5 -----------------------------------------------------------

void criterion_one_ended_wired() {
  Criterion c(5, "wired trees are nearly one-ended at cut radius 5 on tree:3:10");
  Graph g = gen_tree_ball(3, 10);
  const std::vector<std::uint32_t> radii{5};

  // the free tree is the full ball: exactly 3 * 2^4 = 48 branches at cut 5
  {
    Labeling lab = sample_labels(g, 1);
    Forest free_forest = mst_kruskal(g, lab);
    auto stats = end_count_proxy(free_forest, g, 0, radii);
    c.check(stats.branch_counts[0] == 48, "free tree branch count != 48");
  }

  const std::uint32_t reps = 200;
  std::vector<std::vector<std::uint32_t>> counts(reps);
  parallel_for(reps, [&](std::uint32_t rep) {
    Labeling lab = sample_labels(g, rng::child_seed(505, rep));
    Forest wired = wired_msf(g, lab);
    std::vector<char> meets(wired.tree_count, 0);
    for (VertexId b : g.boundary()) meets[wired.component_of[b]] = 1;
    for (std::uint32_t t = 0; t < wired.tree_count; ++t)
      if (meets[t])
        counts[rep].push_back(end_count_proxy(wired, g, t, radii).branch_counts[0]);
  });

  std::uint64_t trees = 0, one_ended = 0, branch_sum = 0;
  for (const auto& per_rep : counts)
    for (std::uint32_t b : per_rep) {
      ++trees;
      if (b <= 1) ++one_ended;
      branch_sum += b;
    }
  double fraction = trees == 0 ? 0.0 : double(one_ended) / trees;
  double mean = trees == 0 ? 0.0 : double(branch_sum) / trees;
  std::ostringstream detail;
  detail << "fraction " << fraction << ", mean branches " << mean;
  c.check(trees > 0, "no boundary-meeting wired trees");
  c.check(fraction >= 0.75, "one-ended fraction below 75%: " + detail.str());
  c.check(mean < 48.0, "mean branch count not below the free tree's 48: " + detail.str());
}

// --- criterion 6 -----------------------------------------------------------

// Independent oracle: offspring Binomial(2,p) survive exactly when 2p > 1.
// Locates the survival threshold by bisection on the fixed-point iteration.
double branching_oracle_threshold() {
  auto survives = [](double p) {
    double s = 1.0;
    for (int k = 0; k < 20000; ++k) s = 1.0 - (1.0 - p * s) * (1.0 - p * s);
    return s > 1e-6;
  };
  double lo = 0.05, hi = 0.95;
  for (int iter = 0; iter < 50; ++iter) {
    double mid = 0.5 * (lo + hi);
    (survives(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Square-lattice bond percolation is self-dual: the oracle point solves
// p = 1 - p.
double duality_oracle_threshold() {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    double mid = 0.5 * (lo + hi);
    (mid < 1.0 - mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_pc_estimates() {
  Criterion c(6, "p_c estimates bracket the oracle value 1/2 on tree:3:12 and the "
                 "64x64 box");
  const double tree_oracle = branching_oracle_threshold();
  const double box_oracle = duality_oracle_threshold();
  c.check(std::abs(tree_oracle - 0.5) < 1e-3, "branching oracle strayed from 1/2");
  c.check(std::abs(box_oracle - 0.5) < 1e-9, "duality oracle strayed from 1/2");

  auto grid = parse_p_grid("0.02:0.02:0.98");
  const std::uint32_t reps = 400;

  auto tree_res = estimate_pc(gen_tree_ball(3, 12), grid, reps, 606);
  c.check(tree_res.pc_estimate.has_value(), "tree sweep never crossed 1/2");
  if (tree_res.pc_estimate) {
    std::ostringstream d;
    d << "tree pc " << *tree_res.pc_estimate;
    c.check(*tree_res.pc_estimate >= tree_oracle - 0.05 &&
                *tree_res.pc_estimate <= tree_oracle + 0.05,
            d.str() + " outside [0.45, 0.55]");
    c.check(*tree_res.pc_estimate >= 0.45 && *tree_res.pc_estimate <= 0.55,
            d.str() + " outside [0.45, 0.55]");
  }

  auto box_res = estimate_pc(gen_grid(64, 64, false), grid, reps, 607);
  c.check(box_res.pc_estimate.has_value(), "box sweep never crossed 1/2");
  if (box_res.pc_estimate) {
    std::ostringstream d;
    d << "box pc " << *box_res.pc_estimate;
    c.check(*box_res.pc_estimate >= box_oracle - 0.05 &&
                *box_res.pc_estimate <= box_oracle + 0.05,
            d.str() + " outside [0.45, 0.55]");
  }
}

// --- criterion 7 -----------------------------------------------------------

void criterion_pu_dichotomy() {
  Criterion c(7, "boundary clusters at p=0.9: many on the tree, one on the box");
  std::vector<double> grid{0.9};
  const std::uint32_t reps = 200;

  auto tree_res = uniqueness_proxy(gen_tree_ball(3, 10), grid, reps, 707);
  std::ostringstream dt;
  dt << "tree mean " << tree_res.mean_boundary_clusters[0];
  c.check(tree_res.mean_boundary_clusters[0] > 2.0, dt.str() + " not > 2");

  auto box_res = uniqueness_proxy(gen_grid(64, 64, false), grid, reps, 708);
  std::ostringstream db;
  db << "box mean " << box_res.mean_boundary_clusters[0];
  c.check(box_res.mean_boundary_clusters[0] >= 0.9 &&
              box_res.mean_boundary_clusters[0] <= 1.1,
          db.str() + " outside [0.9, 1.1]");
}

// --- criterion 8 -----------------------------------------------------------

void criterion_coupling_contract() {
  Criterion c(8, "coupling transformations: ranges, order, kappa_p bookkeeping, demo "
                 "replay against brute force");
  Graph g = random_connected_graph(808, 12, 10);
  const double p = 0.4;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    Labeling lab = sample_labels(g, rng::child_seed(808, rep));
    std::vector<EdgeId> chosen;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (rng::hash_pair(rep, e) % 3 == 0) chosen.push_back(e);

    Labeling up = lab.shifted_up(chosen, p);
    Labeling down = lab.scaled_down(chosen, p);
    for (size_t i = 0; i < chosen.size(); ++i) {
      EdgeId e = chosen[i];
      c.check(up.value(e) >= p && up.value(e) < 1.0, "shift-up left [p,1)");
      c.check(down.value(e) >= 0.0 && down.value(e) < p, "scale-down left [0,p)");
      if (i > 0) {
        EdgeId f = chosen[i - 1];
        bool was = lab.key(f) < lab.key(e);
        c.check((up.key(f) < up.key(e)) == was, "shift-up broke the order");
        c.check((down.key(f) < down.key(e)) == was, "scale-down broke the order");
      }
    }
    // kappa_p loses exactly the shifted edges, gains nothing
    auto before = edges_below(lab, p);
    auto after = edges_below(up, p);
    std::vector<EdgeId> expected;
    std::set_difference(before.begin(), before.end(), chosen.begin(), chosen.end(),
                        std::back_inserter(expected));
    c.check(after == expected, "shift-up changed kappa_p beyond the transformed set");
    // scale-down forces membership
    auto forced = edges_below(down, p);
    c.check(std::includes(forced.begin(), forced.end(), chosen.begin(), chosen.end()),
            "scale-down left a transformed edge outside kappa_p");
  }

  // demo scenario with the brute-force oracle
  DemoCoupling demo = demo_coupling();
  auto scenario = build_coupling_scenario(demo.graph, demo.labels, demo.path, demo.p);
  std::vector<std::uint32_t> radii{1};
  auto report = replay_coupling(demo.graph, demo.labels, scenario, radii);
  for (const auto& a : report.assertions)
    c.check(a.pass, "demo assertion failed: " + a.name);
  Forest brute = brute_force_msf(demo.graph, scenario.coupled);
  for (EdgeId e : demo.path)
    c.check(brute.contains(e), "demo path edge missing from the brute-force forest");
}

// --- criterion 9 -----------------------------------------------------------

void criterion_perturbation_stability() {
  Criterion c(9, "k-edge perturbations move the forest by at most 2k edges");
  for (std::uint64_t i = 0; i < 500; ++i) {
    Graph g = random_connected_graph(rng::child_seed(909, i), 12, 19);  // 30 edges
    Labeling lab = sample_labels(g, i);
    std::uint32_t k = 1 + i % 3;
    Labeling perturbed = lab;
    std::uint32_t changed = 0;
    for (std::uint32_t j = 0; changed < k; ++j) {
      auto e = static_cast<EdgeId>(rng::hash_pair(i, 77 + j) % g.edge_count());
      double nv = rng::uniform(i ^ 0xfeed, j);
      if (perturbed.value(e) == nv) continue;
      perturbed = perturbed.replaced(e, nv);
      ++changed;
    }
    c.check(perturbation_delta(g, lab, perturbed) <= 2 * k,
            "perturbation delta exceeded 2k");
  }
}

// --- criterion 10 ----------------------------------------------------------

void criterion_subtree_identity() {
  Criterion c(10, "wired subtree count formula equals component traversal on tree:3:8");
  Graph g = gen_tree_ball(3, 8);
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    Labeling lab = sample_labels(g, rng::child_seed(1010, rep));
    Forest free_forest = mst_kruskal(g, lab);
    Forest wired = wired_msf(g, lab);
    std::uint32_t formula = wired_subtree_count(g, free_forest.edges, wired);

    // independent traversal oracle: components of the ball after removing the
    // free edges that the wired forest dropped
    DisjointSets sets(g.vertex_count());
    for (EdgeId e : free_forest.edges)
      if (wired.contains(e)) sets.unite(g.edge(e).a, g.edge(e).b);
    std::uint32_t components = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (sets.find(v) == v) ++components;
    c.check(formula == components, "formula disagrees with the traversal count");
  }
}

// --- criterion 11 ----------------------------------------------------------

void criterion_mtp_exactness() {
  Criterion c(11, "mass transport totals balance to 1e-12 on C_10 and the 8x8 torus");
  for (const Graph& host : {gen_cycle(10), gen_grid(8, 8, true)}) {
    for (const TransportRule& rule : builtin_transport_rules()) {
      MtpReport rep = mtp_check(host, rule, 50, 1111, 1e-12);
      std::ostringstream d;
      d << rule.name << " on " << host.family_tag() << " gap " << rep.max_abs_gap;
      c.check(rep.max_abs_gap <= 1e-12, d.str());
      c.check(rep.within_tolerance, d.str());
    }
  }
}

// --- criterion 12 ----------------------------------------------------------

void criterion_determinism() {
  Criterion c(12, "experiment configs rerun to bit-identical CSV output");
  ExperimentConfig sweep;
  sweep.kind = ExperimentKind::PcSweep;
  sweep.family = "tree:3:6";
  sweep.seed = 12;
  sweep.replicates = 30;
  sweep.p_grid = parse_p_grid("0.1:0.1:0.9");

  ExperimentConfig compare;
  compare.kind = ExperimentKind::MsfCompare;
  compare.family = "grid:16:16:box";
  compare.seed = 12;
  compare.replicates = 40;

  for (const ExperimentConfig& cfg : {sweep, compare}) {
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    c.check(a.csv == b.csv, "rerun produced different CSV bytes");

    setenv("MSF_LAB_THREADS", "1", 1);
    auto serial = run_experiment(cfg);
    setenv("MSF_LAB_THREADS", "3", 1);
    auto threaded = run_experiment(cfg);
    unsetenv("MSF_LAB_THREADS");
    c.check(serial.csv == threaded.csv, "worker count changed the CSV bytes");
    c.check(serial.csv == a.csv, "env change altered the CSV bytes");
  }
}

}  // namespace

int main() {
  criterion_finite_identities();
  criterion_wired_subset();
  criterion_tree_triviality();
  criterion_amenable_convergence();
  criterion_one_ended_wired();
  criterion_pc_estimates();
  criterion_pu_dichotomy();
  criterion_coupling_contract();
  criterion_perturbation_stability();
  criterion_subtree_identity();
  criterion_mtp_exactness();
  criterion_determinism();

  if (g_failures == 0) {
    std::printf("all 12 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) FAILED\n", g_failures);
  return 2;
}
