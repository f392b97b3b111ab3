// gbb: batch runner for graphical bilinear bandit experiments.
//
//   gbb table1|fig1|fig2|run [--config <path>] [--seed N] [--out <dir>] [--paper-scale]
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid configuration,
// 3 exhaustive-search budget refused.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "gbb/errors.hpp"
#include "gbb/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gbb::ConfigError(fmt::format("cannot open config '{}'", path));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw gbb::ConfigError(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical bilinear bandit experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool full_scale = false;

  for (const char* name : {"table1", "fig1", "fig2", "run"}) {
    auto* sub = app.add_subcommand(name, fmt::format("run the {} experiment", name));
    sub->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_flag("--paper-scale", full_scale, "use the full-size problem settings as defaults");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : load_config(config_path);
    if (j.contains("experiment") && j["experiment"] != experiment)
      throw gbb::ConfigError(
          fmt::format("config is for '{}' but subcommand is '{}'", j["experiment"].get<std::string>(), experiment));
    j["experiment"] = experiment;
    gbb::ExperimentConfig cfg = gbb::config_from_json(j, full_scale, experiment);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out = *out_dir;

    const auto start = std::chrono::steady_clock::now();
    const gbb::ExperimentOutput output = gbb::run_experiment(cfg);
    gbb::write_output(output, cfg.out);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::cerr << fmt::format("{}: wrote {}/{}.csv and {}/{}.meta.json in {:.2f}s\n", experiment, cfg.out, output.name,
                             cfg.out, output.name, elapsed.count());
    return 0;
  } catch (const gbb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gbb::BudgetExceeded& e) {
    std::cerr << "budget refused: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
