#include <doctest.h>

#include <stdexcept>

#include <cstdlib>

#include "msflab/harness.hpp"
#include "msflab/msf.hpp"
#include "msflab/rng.hpp"

using namespace msflab;

TEST_CASE("family parsing") {
  CHECK(make_family("tree:3:2").vertex_count() == 10);
  CHECK(make_family("grid:4:4:torus").boundary().empty());
  CHECK(make_family("grid:3:3:box").boundary().size() == 8);
  CHECK(make_family("treecycle:3:1:3").vertex_count() == 12);
  CHECK(make_family("cycle:10").vertex_count() == 10);

  CHECK_THROWS_WITH_AS(make_family("hexagon:4"), doctest::Contains("family"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_family("grid:4:4:moebius"), doctest::Contains("family"),
                       std::invalid_argument);
  // infeasible size rejected before allocation
  CHECK_THROWS_WITH_AS(make_family("tree:3:64"), doctest::Contains("budget"),
                       std::invalid_argument);
}

TEST_CASE("grid and config parsing") {
  auto grid = parse_p_grid("0.1:0.2:0.9");
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == doctest::Approx(0.9));
  CHECK(parse_p_grid("0.25,0.5,0.75").size() == 3);
  CHECK_THROWS_AS(parse_p_grid(""), std::invalid_argument);

  auto kv = parse_kv_text(
      "kind = pc-sweep\n"
      "family = tree:3:5   # host\n"
      "seed = 9\n"
      "replicates = 12\n"
      "p_grid = 0.2,0.4,0.6\n");
  auto cfg = config_from_kv(kv);
  CHECK(cfg.kind == ExperimentKind::PcSweep);
  CHECK(cfg.family == "tree:3:5");
  CHECK(cfg.seed == 9);
  CHECK(cfg.replicates == 12);
  CHECK(cfg.p_grid.size() == 3);

  CHECK_THROWS_WITH_AS(config_from_kv({{"bogus", "1"}}), doctest::Contains("bogus"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_kv({{"replicates", "many"}}),
                       doctest::Contains("replicates"), std::invalid_argument);
}

TEST_CASE("msf_compare densities") {
  SUBCASE("tree hosts disagree whenever two boundary branches exist") {
    auto g = gen_tree_ball(3, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto rec = msf_compare(g, sample_labels(g, seed));
      CHECK(rec.interior_edges > 0);
      CHECK(rec.density > 0.0);
    }
  }
  SUBCASE("single-edge graph has density zero") {
    Graph g(2, {{0, 1}}, 0, {1}, "edge", false);
    auto rec = msf_compare(g, Labeling::from_values({0.4}, 0, "t"));
    CHECK(rec.interior_edges == 0);
    CHECK(rec.density == 0.0);
  }
}

TEST_CASE("run_experiment: msf-compare CSV shape") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::MsfCompare;
  cfg.family = "grid:16:16:box";
  cfg.seed = 7;
  cfg.replicates = 50;
  auto rec = run_experiment(cfg);
  CHECK(std::count(rec.csv.begin(), rec.csv.end(), '\n') == 51);  // header + 50 rows
  CHECK(rec.csv.rfind("replicate,disagreement,interior_edges,density\n", 0) == 0);
  CHECK(rec.summary["aggregate"].contains("mean_density"));
}

TEST_CASE("run_experiment: identical configs give identical bytes") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::PcSweep;
  cfg.family = "tree:3:6";
  cfg.seed = 3;
  cfg.replicates = 25;
  cfg.p_grid = parse_p_grid("0.2:0.1:0.8");
  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(a.summary["aggregate"] == b.summary["aggregate"]);
}

TEST_CASE("run_experiment: worker count does not change the bytes") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::PuSweep;
  cfg.family = "grid:12:12:box";
  cfg.seed = 5;
  cfg.replicates = 16;
  cfg.p_grid = parse_p_grid("0.3:0.2:0.9");

  setenv("MSF_LAB_THREADS", "1", 1);
  auto serial = run_experiment(cfg);
  setenv("MSF_LAB_THREADS", "4", 1);
  auto parallel = run_experiment(cfg);
  unsetenv("MSF_LAB_THREADS");
  CHECK(serial.csv == parallel.csv);
}

TEST_CASE("run_experiment: ends-stats and coupling-replay shapes") {
  ExperimentConfig ends;
  ends.kind = ExperimentKind::EndsStats;
  ends.family = "tree:3:6";
  ends.seed = 11;
  ends.replicates = 5;
  ends.cut_radii = {3};
  auto rec = run_experiment(ends);
  CHECK(rec.csv.rfind("replicate,tree_id,cut_radius,branch_count,isolated_flags_packed\n",
                      0) == 0);
  CHECK(rec.summary["aggregate"]["tree_rows"].get<std::uint64_t>() > 0);

  ExperimentConfig couple;
  couple.kind = ExperimentKind::CouplingReplay;
  couple.family = "treecycle:3:2:3";
  couple.seed = 2;
  couple.replicates = 10;
  couple.p_grid = {0.5};
  auto crec = run_experiment(couple);
  auto found = crec.summary["aggregate"]["scenarios_found"].get<std::uint64_t>();
  auto clean =
      crec.summary["aggregate"]["scenarios_all_assertions_pass"].get<std::uint64_t>();
  CHECK(found == clean);
}

TEST_CASE("run_experiment: mtp dispatch") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::MtpCheck;
  cfg.family = "cycle:10";
  cfg.seed = 1;
  cfg.replicates = 5;
  auto rec = run_experiment(cfg);
  CHECK(rec.summary["aggregate"]["all_within_tolerance"].get<bool>());
  CHECK(rec.csv.rfind("rule_name,replicates,mean_out,mean_in,max_abs_gap\n", 0) == 0);
}

TEST_CASE("run_experiment: config errors name the field") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::PcSweep;
  cfg.family = "";
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("family"),
                       std::invalid_argument);

  cfg.family = "tree:3:4";
  cfg.replicates = 0;
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("replicates"),
                       std::invalid_argument);

  cfg.replicates = 2;
  cfg.p_grid.clear();
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("p_grid"),
                       std::invalid_argument);
}
