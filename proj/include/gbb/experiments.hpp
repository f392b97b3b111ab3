#pragma once

// Seeded batch experiments: cut statistics per graph family (table1), the
// problem constants as a function of the diagonal coupling zeta (fig1), and
// the per-round reward fraction of the three policies (fig2, run).
//
// Every experiment renders one CSV and one JSON sidecar. Rows are ordered
// at write time, so the bytes do not depend on thread scheduling.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gbb/graph.hpp"
#include "gbb/oracle.hpp"
#include "gbb/policies.hpp"

namespace gbb {

inline constexpr int kCsvSchemaVersion = 1;

struct GraphConfig {
  GraphFamily family = GraphFamily::complete;
  int n = 5;
  double p = 0.6;
};

enum class CutOrder { ascending, shuffled };

struct ExperimentConfig {
  std::string experiment = "run";
  GraphConfig graph;
  int d = 3;
  long T = 1000;
  std::optional<double> zeta;  // coupling applied to every generated M*
  double lambda = 1.0;
  double delta = 0.1;
  double sigma = 0.1;
  int repetitions = 1;  // seeds per (matrix, policy); matrices in fig1; draws in table1
  int matrices = 1;
  std::uint64_t seed = 0;
  std::string out = "out";
  double zeta_step = 0.01;
  std::uint64_t budget = kDefaultBruteForceBudget;
  std::vector<PolicyKind> policies{PolicyKind::oful, PolicyKind::improved, PolicyKind::etc};
  std::optional<double> radius_override;
  bool preload_theta_star = false;
  CutOrder cut_order = CutOrder::ascending;
};

/// Desk-scale defaults per experiment; full_scale switches to the full problem sizes.
ExperimentConfig default_config(std::string_view experiment, bool full_scale = false);

/// Overlays the keys of `j` on default_config(j["experiment"] or fallback).
/// Unknown keys and out-of-range values raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j, bool full_scale = false,
                                  std::string_view fallback_experiment = "run");
nlohmann::json config_to_json(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);

struct ExperimentOutput {
  std::string name;
  std::string csv;
  nlohmann::json meta;
};

// Structured results, for callers that want numbers rather than CSV text.

struct Table1Row {
  GraphFamily family = GraphFamily::complete;
  int n = 0;
  int draws = 0;
  double mean_edges = 0.0;
  double within_fraction = 0.0;  // (m1 + m2) / m
  long cut_violations = 0;       // draws with m12 + m21 < m / 2
};

struct Fig1Row {
  double zeta = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double delta_gap = 0.0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  int matrices = 0;
  int surrogate = 0;  // matrices whose denominators came from the surrogate
  int gamma_out_of_range = 0;
  int epsilon_out_of_range = 0;
};

struct RunTrace {
  int matrix = 0;
  PolicyKind policy = PolicyKind::oful;
  int repetition = 0;
  std::vector<RoundLog> logs;
};

struct PolicyRuns {
  Graph graph;
  Partition partition;
  std::vector<ProblemConstants> constants;  // one per matrix
  std::vector<RunTrace> traces;             // ordered by (matrix, policy, repetition)
};

std::vector<Table1Row> table1_rows(const ExperimentConfig& cfg);
std::vector<Fig1Row> fig1_rows(const ExperimentConfig& cfg);
PolicyRuns policy_runs(const ExperimentConfig& cfg);

/// Mean of expected_global / opt_sum over rounds [first, last] (1-based, inclusive).
double mean_fraction(const std::vector<RoundLog>& logs, double opt_sum, long first, long last);

ExperimentOutput cmd_table1(const ExperimentConfig& cfg);
ExperimentOutput cmd_fig1(const ExperimentConfig& cfg);
ExperimentOutput cmd_fig2(const ExperimentConfig& cfg);
ExperimentOutput cmd_run(const ExperimentConfig& cfg);
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes <dir>/<name>.csv and <dir>/<name>.meta.json.
void write_output(const ExperimentOutput& output, const std::filesystem::path& dir);

// CSV headers; their FNV-1a hash is embedded in each sidecar.
inline constexpr std::string_view kTable1Header =
    "family,n,draws,mean_edges,m1_plus_m2_over_m,alpha1_const,alpha1_gamma_coef,alpha2_const,alpha2_gamma_coef,"
    "alpha2_epsilon_coef";
inline constexpr std::string_view kFig1Header =
    "zeta,gamma,epsilon,delta_gap,alpha1,alpha2,matrices,provenance,gamma_out_of_range,epsilon_out_of_range";
inline constexpr std::string_view kRunHeader =
    "matrix,seed,policy,t,expected_global,noisy_global,cum_regret,cum_alpha1_regret,cum_alpha2_regret,"
    "fraction_of_optimal";

std::uint64_t fnv1a64(std::string_view text);

}  // namespace gbb
