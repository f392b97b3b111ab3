#include "gbb/experiments.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <fmt/format.h>

#include "gbb/errors.hpp"
#include "gbb/rng.hpp"

namespace gbb {

namespace {

constexpr std::string_view kSeedScheme =
    "splitmix64 counter fan-out: graph=derive(seed,[1,i]), matrix r=derive(seed,[2,r]), "
    "run=derive(seed,[3,r,policy_id,repetition]) with policy_id oful=0 improved=1 etc=2";

std::string_view to_string(CutOrder order) { return order == CutOrder::ascending ? "ascending" : "shuffled"; }

// Runs body(i) for i in [0, count) on the OpenMP pool and rethrows the first
// exception in index order once every task is done.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Graph make_graph(const ExperimentConfig& cfg, std::uint64_t draw) {
  Rng rng = make_rng(cfg.seed, {stream::graph, draw});
  return build_graph({cfg.graph.family, cfg.graph.p}, cfg.graph.n, rng);
}

Partition make_partition(const ExperimentConfig& cfg, const Graph& g) {
  if (cfg.cut_order == CutOrder::ascending) return approx_max_cut(g);
  Rng rng = make_rng(cfg.seed, {stream::graph, 0xc07});
  return approx_max_cut_shuffled(g, rng);
}

EnvironmentSpec make_environment(const ExperimentConfig& cfg, int matrix) {
  const std::uint64_t s = derive_seed(cfg.seed, {stream::matrix, static_cast<std::uint64_t>(matrix)});
  Rng rng(s);
  EnvironmentSpec env = gen_random_mstar(cfg.d, rng, cfg.sigma, s);
  if (cfg.zeta) env = apply_zeta_coupling(env, *cfg.zeta);
  return env;
}

std::vector<double> zeta_grid(double step) {
  std::vector<double> grid;
  for (long k = 0; static_cast<double>(k) * step < 1.0 - 1e-12; ++k)
    grid.push_back(std::round(static_cast<double>(k) * step * 1e12) / 1e12);
  return grid;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

nlohmann::json base_meta(const ExperimentConfig& cfg, std::string_view header, std::size_t rows) {
  return {
      {"experiment", cfg.experiment},
      {"schema_version", kCsvSchemaVersion},
      {"csv_header", header},
      {"header_hash", hex64(fnv1a64(header))},
      {"rows", rows},
      {"seed_scheme", kSeedScheme},
      {"config", config_to_json(cfg)},
  };
}

template <typename T>
T get_checked(const nlohmann::json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig default_config(std::string_view experiment, bool full_scale) {
  ExperimentConfig cfg;
  cfg.experiment = std::string(experiment);
  if (experiment == "table1") {
    cfg.graph = {GraphFamily::complete, 100, 0.6};
    cfg.repetitions = 100;
  } else if (experiment == "fig1") {
    cfg.graph = {GraphFamily::complete, full_scale ? 10 : 6, 0.6};
    cfg.d = full_scale ? 10 : 4;
    cfg.repetitions = full_scale ? 100 : 20;
  } else if (experiment == "fig2") {
    cfg.graph = {GraphFamily::complete, 5, 0.6};
    cfg.d = 10;
    cfg.T = full_scale ? 20000 : 5000;
    cfg.zeta = 0.0;
    cfg.repetitions = 10;
    cfg.matrices = 5;
  } else if (experiment == "run") {
    cfg.graph = {GraphFamily::complete, 4, 0.6};
    cfg.d = 3;
    cfg.T = 1000;
  } else {
    throw ConfigError(fmt::format("unknown experiment '{}'", experiment));
  }
  return cfg;
}

ExperimentConfig config_from_json(const nlohmann::json& j, bool full_scale, std::string_view fallback_experiment) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const std::string experiment =
      j.contains("experiment") ? get_checked<std::string>(j.at("experiment"), "experiment")
                               : std::string(fallback_experiment);
  ExperimentConfig cfg = default_config(experiment, full_scale);

  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") continue;
    if (key == "graph") {
      if (!value.is_object()) throw ConfigError("config key 'graph' must be an object");
      for (const auto& [gk, gv] : value.items()) {
        if (gk == "family") {
          try {
            cfg.graph.family = graph_family_from_string(get_checked<std::string>(gv, "graph.family"));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        } else if (gk == "n") {
          cfg.graph.n = get_checked<int>(gv, "graph.n");
        } else if (gk == "p") {
          cfg.graph.p = get_checked<double>(gv, "graph.p");
        } else {
          throw ConfigError(fmt::format("unknown config key 'graph.{}'", gk));
        }
      }
    } else if (key == "d") {
      cfg.d = get_checked<int>(value, key);
    } else if (key == "T") {
      cfg.T = get_checked<long>(value, key);
    } else if (key == "zeta") {
      cfg.zeta = value.is_null() ? std::nullopt : std::optional<double>(get_checked<double>(value, key));
    } else if (key == "lambda") {
      cfg.lambda = get_checked<double>(value, key);
    } else if (key == "delta") {
      cfg.delta = get_checked<double>(value, key);
    } else if (key == "sigma") {
      cfg.sigma = get_checked<double>(value, key);
    } else if (key == "repetitions") {
      cfg.repetitions = get_checked<int>(value, key);
    } else if (key == "matrices") {
      cfg.matrices = get_checked<int>(value, key);
    } else if (key == "seed") {
      cfg.seed = get_checked<std::uint64_t>(value, key);
    } else if (key == "out") {
      cfg.out = get_checked<std::string>(value, key);
    } else if (key == "zeta_step") {
      cfg.zeta_step = get_checked<double>(value, key);
    } else if (key == "budget") {
      cfg.budget = get_checked<std::uint64_t>(value, key);
    } else if (key == "policies") {
      cfg.policies.clear();
      for (const auto& p : value) {
        try {
          cfg.policies.push_back(policy_from_string(get_checked<std::string>(p, key)));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "radius_override") {
      cfg.radius_override =
          value.is_null() ? std::nullopt : std::optional<double>(get_checked<double>(value, key));
    } else if (key == "preload_theta_star") {
      cfg.preload_theta_star = get_checked<bool>(value, key);
    } else if (key == "cut_order") {
      const auto order = get_checked<std::string>(value, key);
      if (order == "ascending") cfg.cut_order = CutOrder::ascending;
      else if (order == "shuffled") cfg.cut_order = CutOrder::shuffled;
      else throw ConfigError(fmt::format("unknown cut_order '{}'", order));
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
  validate_config(cfg);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json policies = nlohmann::json::array();
  for (PolicyKind p : cfg.policies) policies.push_back(to_string(p));
  return {
      {"experiment", cfg.experiment},
      {"graph", {{"family", to_string(cfg.graph.family)}, {"n", cfg.graph.n}, {"p", cfg.graph.p}}},
      {"d", cfg.d},
      {"T", cfg.T},
      {"zeta", cfg.zeta ? nlohmann::json(*cfg.zeta) : nlohmann::json(nullptr)},
      {"lambda", cfg.lambda},
      {"delta", cfg.delta},
      {"sigma", cfg.sigma},
      {"repetitions", cfg.repetitions},
      {"matrices", cfg.matrices},
      {"seed", cfg.seed},
      {"out", cfg.out},
      {"zeta_step", cfg.zeta_step},
      {"budget", cfg.budget},
      {"policies", policies},
      {"radius_override", cfg.radius_override ? nlohmann::json(*cfg.radius_override) : nlohmann::json(nullptr)},
      {"preload_theta_star", cfg.preload_theta_star},
      {"cut_order", to_string(cfg.cut_order)},
  };
}

void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](std::string msg) { throw ConfigError(std::move(msg)); };
  if (cfg.experiment != "table1" && cfg.experiment != "fig1" && cfg.experiment != "fig2" && cfg.experiment != "run")
    fail(fmt::format("unknown experiment '{}'", cfg.experiment));
  if (cfg.graph.n < 2) fail("graph.n must be at least 2");
  if (!(cfg.graph.p > 0.0 && cfg.graph.p <= 1.0)) fail("graph.p must lie in (0,1]");
  if (cfg.graph.family == GraphFamily::matching && cfg.graph.n % 2 != 0) fail("matching graphs need an even n");
  if (cfg.experiment == "table1" && cfg.graph.n % 2 != 0) fail("table1 includes the matching family: n must be even");
  if (cfg.d < 2) fail("d must be at least 2");
  if (cfg.T < 1) fail("T must be at least 1");
  if (cfg.zeta && !(*cfg.zeta >= 0.0 && *cfg.zeta < 1.0)) fail("zeta must lie in [0,1)");
  if (!(cfg.lambda > 0.0)) fail("lambda must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) fail("delta must lie in (0,1]");
  if (!(cfg.sigma >= 0.0)) fail("sigma must be non-negative");
  if (cfg.repetitions < 1) fail("repetitions must be at least 1");
  if (cfg.matrices < 1) fail("matrices must be at least 1");
  if (!(cfg.zeta_step > 0.0 && cfg.zeta_step <= 1.0)) fail("zeta_step must lie in (0,1]");
  if (cfg.budget < 1) fail("budget must be positive");
  if (cfg.policies.empty()) fail("at least one policy is required");
  if (cfg.radius_override && !(*cfg.radius_override >= 0.0)) fail("radius_override must be non-negative");
}

std::vector<Table1Row> table1_rows(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const GraphFamily families[] = {GraphFamily::complete, GraphFamily::erdos_renyi, GraphFamily::circle,
                                  GraphFamily::star, GraphFamily::matching};
  std::vector<Table1Row> rows;
  for (GraphFamily family : families) {
    const int draws = family == GraphFamily::erdos_renyi ? cfg.repetitions : 1;
    std::vector<EdgeCounts> counts(draws);
    ExperimentConfig local = cfg;
    local.graph.family = family;
    parallel_for(static_cast<std::size_t>(draws), [&](std::size_t r) {
      const Graph g = make_graph(local, r);
      counts[r] = make_partition(local, g).counts;
    });
    Table1Row row{family, cfg.graph.n, draws, 0.0, 0.0, 0};
    for (const EdgeCounts& c : counts) {
      row.mean_edges += static_cast<double>(c.total()) / draws;
      row.within_fraction += c.within_fraction() / draws;
      if (2 * c.cut() < c.total()) ++row.cut_violations;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<Fig1Row> fig1_rows(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Graph g = make_graph(cfg, 0);
  const Partition part = make_partition(cfg, g);
  const ArmSet arms = make_canonical_arms(cfg.d);
  const std::vector<double> grid = zeta_grid(cfg.zeta_step);
  const int mats = cfg.repetitions;

  ExperimentConfig base_cfg = cfg;
  base_cfg.zeta.reset();
  std::vector<EnvironmentSpec> bases;
  bases.reserve(mats);
  for (int r = 0; r < mats; ++r) bases.push_back(make_environment(base_cfg, r));

  std::vector<ProblemConstants> results(grid.size() * mats);
  parallel_for(results.size(), [&](std::size_t task) {
    const std::size_t z = task / mats;
    const std::size_t r = task % mats;
    const EnvironmentSpec env = apply_zeta_coupling(bases[r], grid[z]);
    results[task] =
        compute_problem_constants(g, part, arms, env, cfg.budget, /*allow_surrogate=*/true, kernels::Backend::serial);
  });

  const long m = static_cast<long>(g.num_edges());
  std::vector<Fig1Row> rows;
  rows.reserve(grid.size());
  for (std::size_t z = 0; z < grid.size(); ++z) {
    Fig1Row row;
    row.zeta = grid[z];
    row.matrices = mats;
    for (int r = 0; r < mats; ++r) {
      const ProblemConstants& c = results[z * mats + r];
      row.gamma += c.gamma / mats;
      row.epsilon += c.epsilon / mats;
      row.delta_gap += c.delta_gap / mats;
      if (c.provenance == Provenance::surrogate) ++row.surrogate;
      if (!c.gamma_in_range) ++row.gamma_out_of_range;
      if (!c.epsilon_in_range) ++row.epsilon_out_of_range;
    }
    // Alphas of the averaged constants.
    const Alphas a = compute_alphas(row.gamma, row.epsilon, part.counts, m);
    row.alpha1 = a.alpha1;
    row.alpha2 = a.alpha2;
    rows.push_back(row);
  }
  return rows;
}

namespace {

int policy_id(PolicyKind p) { return static_cast<int>(p); }

}  // namespace

PolicyRuns policy_runs(const ExperimentConfig& cfg) {
  validate_config(cfg);
  Graph g = make_graph(cfg, 0);
  Partition part = make_partition(cfg, g);
  const ArmSet arms = make_canonical_arms(cfg.d);

  std::vector<EnvironmentSpec> envs;
  std::vector<ProblemConstants> constants;
  for (int r = 0; r < cfg.matrices; ++r) {
    envs.push_back(make_environment(cfg, r));
    constants.push_back(compute_problem_constants(g, part, arms, envs.back(), cfg.budget, /*allow_surrogate=*/false));
  }

  const std::size_t per_matrix = cfg.policies.size() * static_cast<std::size_t>(cfg.repetitions);
  std::vector<RunTrace> traces(per_matrix * cfg.matrices);
  RunSettings settings;
  settings.horizon = cfg.T;
  settings.lambda = cfg.lambda;
  settings.delta = cfg.delta;
  settings.radius_override = cfg.radius_override;
  settings.preload_theta_star = cfg.preload_theta_star;

  parallel_for(traces.size(), [&](std::size_t task) {
    const int r = static_cast<int>(task / per_matrix);
    const std::size_t rest = task % per_matrix;
    const PolicyKind policy = cfg.policies[rest / cfg.repetitions];
    const int rep = static_cast<int>(rest % cfg.repetitions);
    const ProblemConstants& c = constants[r];
    const RegretBaseline baseline{c.opt_sum, policy == PolicyKind::improved ? c.alpha2 : c.alpha1};
    Rng rng = make_rng(cfg.seed, {stream::policy_run, static_cast<std::uint64_t>(r),
                                  static_cast<std::uint64_t>(policy_id(policy)), static_cast<std::uint64_t>(rep)});
    traces[task] = {r, policy, rep, run_policy(policy, g, part, arms, envs[r], settings, baseline, rng)};
  });

  return {std::move(g), std::move(part), std::move(constants), std::move(traces)};
}

double mean_fraction(const std::vector<RoundLog>& logs, double opt_sum, long first, long last) {
  if (first < 1 || last < first || last > static_cast<long>(logs.size()))
    throw std::invalid_argument("round window outside the log");
  double total = 0.0;
  for (long t = first; t <= last; ++t) total += logs[t - 1].expected_global / opt_sum;
  return total / static_cast<double>(last - first + 1);
}

ExperimentOutput cmd_table1(const ExperimentConfig& cfg) {
  const auto rows = table1_rows(cfg);
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "{}\n", kTable1Header);
  for (const Table1Row& r : rows) {
    const double f = r.within_fraction;
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{}\n", to_string(r.family), r.n, r.draws,
                   r.mean_edges, f, 0.5, 0.5, 1.0 - f, f, 1.0);
  }
  nlohmann::json meta = base_meta(cfg, kTable1Header, rows.size());
  nlohmann::json violations = nlohmann::json::object();
  for (const Table1Row& r : rows) violations[std::string(to_string(r.family))] = r.cut_violations;
  meta["cut_violations"] = violations;
  return {"table1", fmt::to_string(buf), std::move(meta)};
}

ExperimentOutput cmd_fig1(const ExperimentConfig& cfg) {
  const auto rows = fig1_rows(cfg);
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "{}\n", kFig1Header);
  for (const Fig1Row& r : rows) {
    const std::string_view provenance = r.surrogate == 0 ? "exact" : (r.surrogate == r.matrices ? "surrogate" : "mixed");
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{}\n", r.zeta, r.gamma, r.epsilon,
                   r.delta_gap, r.alpha1, r.alpha2, r.matrices, provenance, r.gamma_out_of_range,
                   r.epsilon_out_of_range);
  }
  nlohmann::json meta = base_meta(cfg, kFig1Header, rows.size());
  meta["note"] = "surrogate rows use an upper bound on opt_sum, so gamma and epsilon are lower bounds";
  return {"fig1", fmt::to_string(buf), std::move(meta)};
}

namespace {

ExperimentOutput render_runs(const ExperimentConfig& cfg, const PolicyRuns& runs) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "{}\n", kRunHeader);
  std::size_t rows = 0;
  for (const RunTrace& trace : runs.traces) {
    const ProblemConstants& c = runs.constants[trace.matrix];
    double cum_a1 = 0.0;
    double cum_a2 = 0.0;
    for (const RoundLog& log : trace.logs) {
      cum_a1 += alpha_regret_increment(c.alpha1, c.opt_sum, log.expected_global);
      cum_a2 += alpha_regret_increment(c.alpha2, c.opt_sum, log.expected_global);
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{}\n", trace.matrix, trace.repetition,
                     to_string(trace.policy), log.t, log.expected_global, log.noisy_global, log.cum_regret, cum_a1,
                     cum_a2, log.expected_global / c.opt_sum);
      ++rows;
    }
  }
  nlohmann::json meta = base_meta(cfg, kRunHeader, rows);
  nlohmann::json constants = nlohmann::json::array();
  for (std::size_t r = 0; r < runs.constants.size(); ++r) {
    nlohmann::json entry = constants_to_json(runs.constants[r]);
    entry["matrix"] = r;
    entry["environment"] = environment_to_json(make_environment(cfg, static_cast<int>(r)));
    constants.push_back(std::move(entry));
  }
  meta["constants"] = std::move(constants);
  meta["graph"] = graph_to_json(runs.graph);
  meta["partition"] = {{"v1", runs.partition.v1}, {"v2", runs.partition.v2}};
  return {cfg.experiment, fmt::to_string(buf), std::move(meta)};
}

}  // namespace

ExperimentOutput cmd_fig2(const ExperimentConfig& cfg) { return render_runs(cfg, policy_runs(cfg)); }

ExperimentOutput cmd_run(const ExperimentConfig& cfg) { return render_runs(cfg, policy_runs(cfg)); }

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "table1") return cmd_table1(cfg);
  if (cfg.experiment == "fig1") return cmd_fig1(cfg);
  if (cfg.experiment == "fig2") return cmd_fig2(cfg);
  if (cfg.experiment == "run") return cmd_run(cfg);
  throw ConfigError(fmt::format("unknown experiment '{}'", cfg.experiment));
}

void write_output(const ExperimentOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (output.name + ".csv"), std::ios::binary);
    if (!csv) throw std::runtime_error(fmt::format("cannot write {}", (dir / (output.name + ".csv")).string()));
    csv << output.csv;
  }
  std::ofstream meta(dir / (output.name + ".meta.json"), std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write metadata sidecar");
  meta << output.meta.dump(2) << '\n';
}

}  // namespace gbb
