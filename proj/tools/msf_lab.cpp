// msf-lab: generate finite host graphs, sample labelings, build free/wired
// forests, and run the percolation / end-structure / coupling / mass-transport
// experiments. Exit codes: 0 success, 1 configuration error, 2 assertion
// failure in a verification mode.

#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "msflab/ends.hpp"
#include "msflab/harness.hpp"
#include "msflab/msf.hpp"
#include "msflab/mtp.hpp"
#include "msflab/percolation.hpp"
#include "msflab/rng.hpp"
#include "msflab/util.hpp"

using namespace msflab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string family;
  std::uint64_t seed = 1;
  std::uint32_t replicates = 1;
  std::string p_grid;
  std::string cut_radii;
  std::string out;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* replicates_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--family", opts.family,
                  "tree:D:R, grid:W:H:torus|box, treecycle:D:R:K, cycle:N");
  opts.seed_opt = cmd->add_option("--seed", opts.seed, "master seed");
  opts.replicates_opt =
      cmd->add_option("--replicates", opts.replicates, "Monte Carlo replicates");
  cmd->add_option("--p-grid", opts.p_grid, "a:step:b range or comma list");
  cmd->add_option("--cut-radii", opts.cut_radii, "comma list of cut radii");
  cmd->add_option("--out", opts.out, "output CSV path (JSON record written beside it)");
}

// Config file first, explicit flags override.
ExperimentConfig build_config(ExperimentKind kind, const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config_file(opts.config_path);
  cfg.kind = kind;
  if (!opts.family.empty()) cfg.family = opts.family;
  if (opts.seed_opt != nullptr && opts.seed_opt->count() > 0) cfg.seed = opts.seed;
  if (opts.replicates_opt != nullptr && opts.replicates_opt->count() > 0)
    cfg.replicates = opts.replicates;
  if (!opts.p_grid.empty()) cfg.p_grid = parse_p_grid(opts.p_grid);
  if (!opts.cut_radii.empty()) cfg.cut_radii = parse_radii(opts.cut_radii);
  if (!opts.out.empty()) cfg.out_path = opts.out;
  return cfg;
}

void print_summary(const RunRecord& rec) {
  std::cout << kind_name(rec.config.kind) << " on " << rec.config.family << ", seed "
            << rec.config.seed << ", " << rec.config.replicates << " replicate(s)\n";
  std::cout << "aggregate: " << rec.summary["aggregate"].dump() << "\n";
  if (!rec.config.out_path.empty())
    std::cout << "wrote " << rec.config.out_path << " and " << rec.config.out_path
              << ".json\n";
}

int run_demo_coupling(const std::string& out) {
  DemoCoupling demo = demo_coupling();
  auto scenario = build_coupling_scenario(demo.graph, demo.labels, demo.path, demo.p);
  std::uint32_t radii[] = {1};
  auto report = replay_coupling(demo.graph, demo.labels, scenario, radii);

  std::cout << "coupling replay on the built-in 8-vertex demo (p = "
            << format_g17(demo.p) << ")\n";
  for (const auto& a : report.assertions)
    std::cout << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.name << ": "
              << a.detail << "\n";
  std::cout << "  tracked tree branches at cut 1: "
            << report.tracked_before.branch_counts[0] << " before, "
            << report.merged_after.branch_counts[0] << " after\n";
  if (!out.empty()) {
    std::ostringstream csv;
    csv << "assertion,pass,detail\n";
    for (const auto& a : report.assertions)
      csv << a.name << "," << (a.pass ? 1 : 0) << "," << a.detail << "\n";
    write_text_file(out, csv.str());
  }
  return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal spanning forest laboratory"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "emit a host graph as an edge list");
  CommonOpts gen_opts;
  std::string import_path;
  generate->add_option("--config", gen_opts.config_path, "key = value config file");
  generate->add_option("--family", gen_opts.family, "family spec");
  generate->add_option("--import", import_path, "re-export an existing edge-list file");
  generate->add_option("--out", gen_opts.out, "output path")->required();

  // labels
  auto* labels_cmd = app.add_subcommand("labels", "sample a labeling and export it");
  CommonOpts lab_opts;
  add_common(labels_cmd, lab_opts);

  // msf
  auto* msf_cmd = app.add_subcommand("msf", "compute a forest and export it");
  CommonOpts msf_opts;
  std::string msf_mode = "free";
  bool stop_at_boundary = false;
  std::int64_t invasion_source = -1;
  add_common(msf_cmd, msf_opts);
  msf_cmd->add_option("--mode", msf_mode, "free | wired | invasion");
  msf_cmd->add_flag("--stop-at-boundary", stop_at_boundary, "halt invasion at the boundary");
  msf_cmd->add_option("--source", invasion_source, "invasion source (default: center)");

  // sweeps
  auto* pc_cmd = app.add_subcommand("sweep-pc", "crossing-probability sweep & p_c estimate");
  CommonOpts pc_opts;
  add_common(pc_cmd, pc_opts);
  auto* pu_cmd = app.add_subcommand("sweep-pu", "boundary-cluster sweep & p_u proxy");
  CommonOpts pu_opts;
  add_common(pu_cmd, pu_opts);

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "free vs wired disagreement density");
  CommonOpts cmp_opts;
  add_common(cmp_cmd, cmp_opts);

  // ends
  auto* ends_cmd = app.add_subcommand("ends", "branch statistics of forest trees");
  CommonOpts ends_opts;
  std::string ends_forest = "wired";
  add_common(ends_cmd, ends_opts);
  ends_cmd->add_option("--forest", ends_forest, "free | wired");

  // couple
  auto* couple_cmd = app.add_subcommand("couple", "replay the label-coupling transformations");
  CommonOpts couple_opts;
  bool demo = false;
  add_common(couple_cmd, couple_opts);
  couple_cmd->add_flag("--demo", demo, "run the built-in 8-vertex scenario");

  // mtp
  auto* mtp_cmd = app.add_subcommand("mtp", "mass transport principle check");
  CommonOpts mtp_opts;
  std::string rule = "all";
  double tolerance = 1e-12;
  add_common(mtp_cmd, mtp_opts);
  mtp_cmd->add_option("--rule", rule, "builtin rule name or 'all'");
  mtp_cmd->add_option("--tolerance", tolerance, "verdict tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      if (gen_opts.family.empty() && !gen_opts.config_path.empty())
        gen_opts.family = load_config_file(gen_opts.config_path).family;
      if (import_path.empty() && gen_opts.family.empty())
        throw std::invalid_argument("generate: need --family, --import or --config");
      Graph g = import_path.empty() ? make_family(gen_opts.family)
                                    : read_graph(read_text_file(import_path));
      write_text_file(gen_opts.out, write_graph(g));
      std::cout << "wrote " << gen_opts.out << " (" << g.vertex_count() << " vertices, "
                << g.edge_count() << " edges)\n";
      return 0;
    }
    if (labels_cmd->parsed()) {
      ExperimentConfig cfg = build_config(ExperimentKind::MsfCompare, lab_opts);
      Graph g = make_family(cfg.family);
      Labeling lab = sample_labels(g, cfg.seed);
      if (cfg.out_path.empty()) throw std::invalid_argument("labels: --out required");
      write_text_file(cfg.out_path, write_labeling(lab));
      std::cout << "wrote " << cfg.out_path << " (" << lab.edge_count() << " labels)\n";
      return 0;
    }
    if (msf_cmd->parsed()) {
      ExperimentConfig cfg = build_config(ExperimentKind::MsfCompare, msf_opts);
      Graph g = make_family(cfg.family);
      Labeling lab = sample_labels(g, cfg.seed);
      Forest f;
      if (msf_mode == "free")
        f = mst_kruskal(g, lab);
      else if (msf_mode == "wired")
        f = wired_msf(g, lab);
      else if (msf_mode == "invasion")
        f = invasion_tree(g, lab,
                          invasion_source < 0 ? g.center()
                                              : static_cast<VertexId>(invasion_source),
                          stop_at_boundary);
      else
        throw std::invalid_argument("msf: --mode must be free, wired or invasion");
      if (cfg.out_path.empty()) throw std::invalid_argument("msf: --out required");
      write_text_file(cfg.out_path, write_forest(f));
      std::cout << "wrote " << cfg.out_path << " (" << f.edges.size() << " edges, "
                << f.tree_count << " trees)\n";
      return 0;
    }
    if (couple_cmd->parsed() && demo) return run_demo_coupling(couple_opts.out);

    ExperimentKind kind;
    CommonOpts* opts;
    if (pc_cmd->parsed()) {
      kind = ExperimentKind::PcSweep;
      opts = &pc_opts;
    } else if (pu_cmd->parsed()) {
      kind = ExperimentKind::PuSweep;
      opts = &pu_opts;
    } else if (cmp_cmd->parsed()) {
      kind = ExperimentKind::MsfCompare;
      opts = &cmp_opts;
    } else if (ends_cmd->parsed()) {
      kind = ExperimentKind::EndsStats;
      opts = &ends_opts;
    } else if (couple_cmd->parsed()) {
      kind = ExperimentKind::CouplingReplay;
      opts = &couple_opts;
    } else if (mtp_cmd->parsed()) {
      kind = ExperimentKind::MtpCheck;
      opts = &mtp_opts;
    } else {
      return 1;
    }

    ExperimentConfig cfg = build_config(kind, *opts);
    if (ends_cmd->parsed()) cfg.forest = ends_forest;
    if (mtp_cmd->parsed()) {
      cfg.rule = rule;
      cfg.tolerance = tolerance;
    }
    RunRecord rec = run_experiment(cfg);
    print_summary(rec);

    // verification modes gate the exit code on their own assertions
    if (kind == ExperimentKind::MtpCheck &&
        !rec.summary["aggregate"]["all_within_tolerance"].get<bool>()) {
      std::cerr << "mtp: transport totals disagree beyond tolerance\n";
      return 2;
    }
    if (kind == ExperimentKind::CouplingReplay) {
      auto found = rec.summary["aggregate"]["scenarios_found"].get<std::uint64_t>();
      auto clean =
          rec.summary["aggregate"]["scenarios_all_assertions_pass"].get<std::uint64_t>();
      if (found != clean) {
        std::cerr << "couple: " << (found - clean) << " scenario(s) failed assertions\n";
        return 2;
      }
    }
    return 0;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
