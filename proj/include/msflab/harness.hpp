#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msflab/graph.hpp"
#include "msflab/labels.hpp"

#include <json.hpp>

namespace msflab {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind {
  MsfCompare,
  PcSweep,
  PuSweep,
  EndsStats,
  CouplingReplay,
  MtpCheck,
};

const char* kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::MsfCompare;
  std::string family;
  std::uint64_t seed = 1;
  std::uint32_t replicates = 1;
  std::vector<double> p_grid;
  std::vector<std::uint32_t> cut_radii;
  std::string forest = "wired";  // ends-stats: free | wired
  std::string rule = "all";      // mtp-check: builtin rule name or "all"
  double tolerance = 1e-12;      // mtp-check verdict tolerance
  std::string out_path;          // CSV destination; empty = in-memory only
};

// Family specs: tree:D:R, grid:W:H:torus|box, treecycle:D:R:K, cycle:N.
// Infeasible sizes are rejected before any allocation.
Graph make_family(const std::string& spec);

// "a:step:b" arithmetic grid or comma-separated values.
std::vector<double> parse_p_grid(const std::string& spec);
std::vector<std::uint32_t> parse_radii(const std::string& spec);

// One `key = value` per line; '#' starts a comment.
std::map<std::string, std::string> parse_kv_text(const std::string& text);
ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config_file(const std::string& path);

struct MsfCompareRecord {
  std::uint32_t disagreement = 0;    // interior free edges absent from wired
  std::uint32_t interior_edges = 0;  // edges inside the inner half-ball
  double density = 0.0;
};

// Free-vs-wired disagreement density among edges of the inner half-ball
// (both endpoints within half the center's eccentricity).
MsfCompareRecord msf_compare(const Graph& g, const Labeling& lab);

struct RunRecord {
  ExperimentConfig config;
  std::string csv;          // the experiment's CSV table, byte-reproducible
  nlohmann::json summary;   // config echo + aggregates + wall clock + version
  double wall_seconds = 0.0;
  std::uint64_t fingerprint = 0;  // hash of seed + parameters
};

// Dispatches on cfg.kind, runs every replicate (concurrently when
// MSF_LAB_THREADS allows), writes the CSV to cfg.out_path when set and the
// JSON record next to it (.json appended). Identical configs reproduce
// identical CSV bytes regardless of worker count.
RunRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace msflab
