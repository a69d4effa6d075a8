#include "msflab/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "msflab/ends.hpp"
#include "msflab/msf.hpp"
#include "msflab/mtp.hpp"
#include "msflab/percolation.hpp"
#include "msflab/rng.hpp"
#include "msflab/util.hpp"

namespace msflab {

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::MsfCompare: return "msf-compare";
    case ExperimentKind::PcSweep: return "pc-sweep";
    case ExperimentKind::PuSweep: return "pu-sweep";
    case ExperimentKind::EndsStats: return "ends-stats";
    case ExperimentKind::CouplingReplay: return "coupling-replay";
    case ExperimentKind::MtpCheck: return "mtp-check";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::MsfCompare, ExperimentKind::PcSweep, ExperimentKind::PuSweep,
        ExperimentKind::EndsStats, ExperimentKind::CouplingReplay,
        ExperimentKind::MtpCheck})
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("config field 'kind': unknown experiment '" + name + "'");
}

Graph make_family(const std::string& spec) {
  auto parts = split(spec, ':');
  try {
    if (parts[0] == "tree" && parts.size() == 3)
      return gen_tree_ball(parse_u32(parts[1]), parse_u32(parts[2]));
    if (parts[0] == "grid" && parts.size() == 4) {
      bool wrap;
      if (parts[3] == "torus")
        wrap = true;
      else if (parts[3] == "box")
        wrap = false;
      else
        throw std::invalid_argument("grid wants 'torus' or 'box'");
      return gen_grid(parse_u32(parts[1]), parse_u32(parts[2]), wrap);
    }
    if (parts[0] == "treecycle" && parts.size() == 4)
      return gen_tree_cycle_product(parse_u32(parts[1]), parse_u32(parts[2]),
                                    parse_u32(parts[3]));
    if (parts[0] == "cycle" && parts.size() == 2) return gen_cycle(parse_u32(parts[1]));
  } catch (const std::invalid_argument& err) {
    throw std::invalid_argument("config field 'family': " + std::string(err.what()));
  }
  throw std::invalid_argument(
      "config field 'family': expected tree:D:R, grid:W:H:torus|box, treecycle:D:R:K "
      "or cycle:N, got '" +
      spec + "'");
}

std::vector<double> parse_p_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(',') != std::string::npos || spec.find(':') == std::string::npos) {
    for (const std::string& tok : split(spec, ','))
      if (!tok.empty()) grid.push_back(parse_double(tok));
  } else {
    auto parts = split(spec, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("p grid wants 'start:step:end' or comma list");
    double start = parse_double(parts[0]);
    double step = parse_double(parts[1]);
    double end = parse_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("p grid step must be positive");
    for (unsigned i = 0;; ++i) {
      double p = start + i * step;
      if (p > end + step * 0.5) break;
      grid.push_back(p);
    }
  }
  if (grid.empty()) throw std::invalid_argument("empty p grid");
  return grid;
}

std::vector<std::uint32_t> parse_radii(const std::string& spec) {
  std::vector<std::uint32_t> out;
  for (const std::string& tok : split(spec, ','))
    if (!tok.empty()) out.push_back(parse_u32(tok));
  return out;
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "kind")
        cfg.kind = parse_kind(value);
      else if (key == "family")
        cfg.family = value;
      else if (key == "seed")
        cfg.seed = parse_u64(value);
      else if (key == "replicates")
        cfg.replicates = parse_u32(value);
      else if (key == "p_grid")
        cfg.p_grid = parse_p_grid(value);
      else if (key == "cut_radii")
        cfg.cut_radii = parse_radii(value);
      else if (key == "forest")
        cfg.forest = value;
      else if (key == "rule")
        cfg.rule = value;
      else if (key == "tolerance")
        cfg.tolerance = parse_double(value);
      else if (key == "out")
        cfg.out_path = value;
      else
        throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const std::invalid_argument& err) {
      std::string what = err.what();
      if (what.rfind("config field", 0) == 0 || what.rfind("unknown config", 0) == 0)
        throw;
      throw std::invalid_argument("config field '" + key + "': " + what);
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  return config_from_kv(parse_kv_text(read_text_file(path)));
}

MsfCompareRecord msf_compare(const Graph& g, const Labeling& lab) {
  Forest free_forest = mst_kruskal(g, lab);
  Forest wired_forest = wired_msf(g, lab);

  const auto dist = bfs_distances(g, g.center());
  const std::uint32_t half = graph_radius(g) / 2;
  auto interior = [&](EdgeId e) {
    return dist[g.edge(e).a] <= half && dist[g.edge(e).b] <= half;
  };

  MsfCompareRecord rec;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!interior(e)) continue;
    ++rec.interior_edges;
    if (free_forest.contains(e) && !wired_forest.contains(e)) ++rec.disagreement;
  }
  rec.density = rec.interior_edges == 0
                    ? 0.0
                    : static_cast<double>(rec.disagreement) / rec.interior_edges;
  return rec;
}

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok)
    throw std::invalid_argument("config field '" + std::string(field) + "': " + message);
}

std::uint64_t config_fingerprint(const ExperimentConfig& cfg) {
  std::ostringstream canon;
  canon << kind_name(cfg.kind) << "|" << cfg.family << "|" << cfg.seed << "|"
        << cfg.replicates << "|";
  for (double p : cfg.p_grid) canon << format_g17(p) << ",";
  canon << "|";
  for (std::uint32_t r : cfg.cut_radii) canon << r << ",";
  canon << "|" << cfg.forest << "|" << cfg.rule << "|" << format_g17(cfg.tolerance);
  std::uint64_t h = 0x7c0e3a55u;
  for (char c : canon.str()) h = rng::mix64(h ^ static_cast<unsigned char>(c));
  return h;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["kind"] = kind_name(cfg.kind);
  j["family"] = cfg.family;
  j["seed"] = cfg.seed;
  j["replicates"] = cfg.replicates;
  j["p_grid"] = cfg.p_grid;
  j["cut_radii"] = cfg.cut_radii;
  j["forest"] = cfg.forest;
  j["rule"] = cfg.rule;
  j["tolerance"] = cfg.tolerance;
  j["out"] = cfg.out_path;
  return j;
}

struct KindOutput {
  std::string csv;
  nlohmann::json aggregate;
};

KindOutput run_msf_compare(const ExperimentConfig& cfg, const Graph& g) {
  std::vector<MsfCompareRecord> recs(cfg.replicates);
  parallel_for(cfg.replicates, [&](std::uint32_t r) {
    recs[r] = msf_compare(g, sample_labels(g, rng::child_seed(cfg.seed, r)));
  });
  std::ostringstream csv;
  csv << "replicate,disagreement,interior_edges,density\n";
  std::vector<double> densities(cfg.replicates);
  for (std::uint32_t r = 0; r < cfg.replicates; ++r) {
    csv << r << "," << recs[r].disagreement << "," << recs[r].interior_edges << ","
        << format_g17(recs[r].density) << "\n";
    densities[r] = recs[r].density;
  }
  double mean = pairwise_sum(densities) / cfg.replicates;
  double se = 0.0;
  if (cfg.replicates > 1) {
    double ss = 0.0;
    for (double d : densities) ss += (d - mean) * (d - mean);
    se = std::sqrt(ss / (cfg.replicates - 1.0) / cfg.replicates);
  }
  nlohmann::json agg;
  agg["mean_density"] = mean;
  agg["density_se"] = se;
  return {csv.str(), agg};
}

KindOutput run_sweep_kind(const ExperimentConfig& cfg, const Graph& g, bool pc) {
  require(!cfg.p_grid.empty(), "p_grid", "required for sweeps");
  SweepResult res = pc ? estimate_pc(g, cfg.p_grid, cfg.replicates, cfg.seed)
                       : uniqueness_proxy(g, cfg.p_grid, cfg.replicates, cfg.seed);
  nlohmann::json agg;
  if (res.pc_estimate)
    agg["pc_estimate"] = *res.pc_estimate;
  else
    agg["pc_estimate"] = "not reached";
  if (res.pu_proxy)
    agg["pu_proxy"] = *res.pu_proxy;
  else
    agg["pu_proxy"] = "not reached";
  return {sweep_csv(res), agg};
}

KindOutput run_ends_stats(const ExperimentConfig& cfg, const Graph& g) {
  require(!cfg.cut_radii.empty(), "cut_radii", "required for ends-stats");
  require(cfg.forest == "free" || cfg.forest == "wired", "forest",
          "expected 'free' or 'wired'");
  const bool wired = cfg.forest == "wired";

  std::vector<std::vector<EndStats>> rows(cfg.replicates);
  parallel_for(cfg.replicates, [&](std::uint32_t r) {
    Labeling lab = sample_labels(g, rng::child_seed(cfg.seed, r));
    Forest f = wired ? wired_msf(g, lab) : mst_kruskal(g, lab);
    std::vector<char> meets(f.tree_count, 0);
    for (VertexId b : g.boundary()) meets[f.component_of[b]] = 1;
    for (std::uint32_t t = 0; t < f.tree_count; ++t)
      if (meets[t]) rows[r].push_back(end_count_proxy(f, g, t, cfg.cut_radii));
  });

  std::ostringstream csv;
  csv << "replicate,tree_id,cut_radius,branch_count,isolated_flags_packed\n";
  double branch_sum = 0.0;
  std::uint64_t branch_rows = 0;
  for (std::uint32_t r = 0; r < cfg.replicates; ++r)
    for (const EndStats& s : rows[r])
      for (size_t i = 0; i < s.cut_radii.size(); ++i) {
        csv << r << "," << s.tree_id << "," << s.cut_radii[i] << ","
            << s.branch_counts[i] << ",";
        for (char fl : s.isolated_flags[i]) csv << (fl ? '1' : '0');
        csv << "\n";
        branch_sum += s.branch_counts[i];
        ++branch_rows;
      }
  nlohmann::json agg;
  agg["mean_branch_count"] = branch_rows == 0 ? 0.0 : branch_sum / branch_rows;
  agg["tree_rows"] = branch_rows;
  return {csv.str(), agg};
}

KindOutput run_coupling_replay(const ExperimentConfig& cfg, const Graph& g) {
  require(cfg.p_grid.size() == 1, "p_grid", "coupling-replay wants a single p");
  const double p = cfg.p_grid[0];
  std::vector<std::uint32_t> radii =
      cfg.cut_radii.empty() ? std::vector<std::uint32_t>{1} : cfg.cut_radii;

  struct Row {
    bool found = false;
    size_t path_len = 0;
    std::uint32_t passed = 0, total = 0;
  };
  std::vector<Row> rowset(cfg.replicates);
  parallel_for(cfg.replicates, [&](std::uint32_t r) {
    Labeling lab = sample_labels(g, rng::child_seed(cfg.seed, r));
    auto path = find_scenario_path(g, lab, p);
    if (!path) return;
    auto scenario = build_coupling_scenario(g, lab, *path, p);
    auto report = replay_coupling(g, lab, scenario, radii);
    Row& row = rowset[r];
    row.found = true;
    row.path_len = path->size();
    row.total = static_cast<std::uint32_t>(report.assertions.size());
    for (const auto& a : report.assertions) row.passed += a.pass ? 1 : 0;
  });

  std::ostringstream csv;
  csv << "replicate,scenario_found,path_len,assertions_passed,assertions_total\n";
  std::uint32_t found = 0, clean = 0;
  for (std::uint32_t r = 0; r < cfg.replicates; ++r) {
    const Row& row = rowset[r];
    csv << r << "," << (row.found ? 1 : 0) << "," << row.path_len << "," << row.passed
        << "," << row.total << "\n";
    found += row.found ? 1 : 0;
    clean += (row.found && row.passed == row.total) ? 1 : 0;
  }
  nlohmann::json agg;
  agg["scenarios_found"] = found;
  agg["scenarios_all_assertions_pass"] = clean;
  return {csv.str(), agg};
}

KindOutput run_mtp_check(const ExperimentConfig& cfg, const Graph& g) {
  std::vector<MtpReport> reports;
  if (cfg.rule == "all") {
    for (const TransportRule& r : builtin_transport_rules())
      reports.push_back(mtp_check(g, r, cfg.replicates, cfg.seed, cfg.tolerance));
  } else {
    reports.push_back(mtp_check(g, find_transport_rule(cfg.rule), cfg.replicates,
                                cfg.seed, cfg.tolerance));
  }
  bool all_ok = true;
  double worst = 0.0;
  for (const MtpReport& r : reports) {
    all_ok = all_ok && r.within_tolerance;
    worst = std::max(worst, r.max_abs_gap);
  }
  nlohmann::json agg;
  agg["all_within_tolerance"] = all_ok;
  agg["max_abs_gap"] = worst;
  return {mtp_csv(reports), agg};
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg) {
  require(!cfg.family.empty(), "family", "required");
  require(cfg.replicates >= 1, "replicates", "must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  Graph g = make_family(cfg.family);
  KindOutput out;
  switch (cfg.kind) {
    case ExperimentKind::MsfCompare: out = run_msf_compare(cfg, g); break;
    case ExperimentKind::PcSweep: out = run_sweep_kind(cfg, g, true); break;
    case ExperimentKind::PuSweep: out = run_sweep_kind(cfg, g, false); break;
    case ExperimentKind::EndsStats: out = run_ends_stats(cfg, g); break;
    case ExperimentKind::CouplingReplay: out = run_coupling_replay(cfg, g); break;
    case ExperimentKind::MtpCheck: out = run_mtp_check(cfg, g); break;
  }

  RunRecord rec;
  rec.config = cfg;
  rec.csv = std::move(out.csv);
  rec.fingerprint = config_fingerprint(cfg);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.summary["config"] = config_json(cfg);
  rec.summary["aggregate"] = out.aggregate;
  rec.summary["wall_seconds"] = rec.wall_seconds;
  rec.summary["version"] = kVersion;
  {
    std::ostringstream fp;
    fp << std::hex << rec.fingerprint;
    rec.summary["fingerprint"] = fp.str();
  }

  if (!cfg.out_path.empty()) {
    write_text_file(cfg.out_path, rec.csv);
    write_text_file(cfg.out_path + ".json", rec.summary.dump(2) + "\n");
  }
  return rec;
}

}  // namespace msflab
