#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "doctest.h"
#include "gbb/errors.hpp"
#include "gbb/experiments.hpp"

using namespace gbb;
using doctest::Approx;
using nlohmann::json;

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  csv.header = split(line);
  while (std::getline(ss, line)) csv.rows.push_back(split(line));
  return csv;
}

ExperimentConfig small_run() {
  ExperimentConfig cfg = default_config("run");
  cfg.graph = {GraphFamily::complete, 4, 0.6};
  cfg.d = 3;
  cfg.T = 60;
  cfg.sigma = 0.3;
  cfg.repetitions = 2;
  cfg.matrices = 2;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = config_from_json(json{{"experiment", "fig2"}, {"T", 123}, {"graph", {{"n", 4}}}});
  CHECK(cfg.experiment == "fig2");
  CHECK(cfg.T == 123);
  CHECK(cfg.graph.n == 4);
  CHECK(cfg.d == default_config("fig2").d);

  const ExperimentConfig round = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(round) == config_to_json(cfg));

  CHECK_THROWS_AS(config_from_json(json{{"experiment", "run"}, {"horizon", 5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "nope"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"d", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"sigma", -1.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"delta", 0.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"T", "ten"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"graph", {{"family", "torus"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"policies", {"oful", "greedy"}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"zeta", 1.0}}), ConfigError);

  CHECK(default_config("fig2", true).T == 20000);
  CHECK(default_config("fig1", true).d == 10);
}

TEST_CASE("table1 rows") {
  ExperimentConfig cfg = default_config("table1");
  const auto rows = table1_rows(cfg);
  std::map<GraphFamily, Table1Row> by;
  for (const auto& r : rows) by[r.family] = r;
  REQUIRE(by.size() == 5);
  CHECK(by[GraphFamily::complete].within_fraction == 4900.0 / 9900.0);
  CHECK(by[GraphFamily::star].within_fraction == 0.0);
  CHECK(by[GraphFamily::matching].within_fraction == 0.0);
  CHECK(by[GraphFamily::circle].within_fraction <= 0.02);
  CHECK(by[GraphFamily::erdos_renyi].within_fraction >= 0.43);
  CHECK(by[GraphFamily::erdos_renyi].within_fraction <= 0.48);
  CHECK(by[GraphFamily::erdos_renyi].draws == 100);
  for (const auto& r : rows) CHECK(r.cut_violations == 0);

  const Csv csv = parse(cmd_table1(cfg).csv);
  CHECK(csv.rows.size() == 5);
  for (const auto& row : csv.rows) {
    const double w = std::stod(row[csv.col("m1_plus_m2_over_m")]);
    CHECK(std::stod(row[csv.col("alpha2_const")]) == Approx(1.0 - w));
    CHECK(std::stod(row[csv.col("alpha2_gamma_coef")]) == Approx(w));
    CHECK(std::stod(row[csv.col("alpha1_const")]) == 0.5);
  }
}

TEST_CASE("fig1 rows") {
  ExperimentConfig cfg = default_config("fig1");
  cfg.repetitions = 3;
  cfg.zeta_step = 0.25;
  const auto rows = fig1_rows(cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows.front().zeta == 0.0);
  CHECK(rows.front().gamma == 0.0);
  for (const auto& r : rows) {
    CHECK(r.alpha1 == 0.5 + 0.5 * r.gamma);
    CHECK(r.alpha2 >= r.alpha1 - 1e-12);
    CHECK(r.surrogate == 0);
    CHECK(r.matrices == 3);
  }

  cfg.budget = 10;
  const auto surrogate = fig1_rows(cfg);
  CHECK(surrogate.front().surrogate == 3);
  const Csv csv = parse(cmd_fig1(cfg).csv);
  CHECK(csv.rows.front()[csv.col("provenance")] == "surrogate");
}

TEST_CASE("run output is complete and self-consistent") {
  const ExperimentConfig cfg = small_run();
  const ExperimentOutput out = cmd_run(cfg);
  const Csv csv = parse(out.csv);
  CHECK(out.meta["csv_header"] == std::string(kRunHeader));
  CHECK(out.meta["header_hash"].get<std::string>().size() == 16);
  CHECK(csv.rows.size() == 2 * 3 * 2 * 60);
  CHECK(out.meta["rows"] == csv.rows.size());

  const auto& constants = out.meta["constants"];
  std::map<std::tuple<std::string, std::string, std::string>, double> cum1, cum2;
  std::map<std::tuple<std::string, std::string, std::string>, long> last_t;
  for (const auto& row : csv.rows) {
    const int matrix = std::stoi(row[csv.col("matrix")]);
    const double opt = constants[matrix]["opt_sum"];
    const double a1 = constants[matrix]["alpha1"];
    const double a2 = constants[matrix]["alpha2"];
    const auto key = std::make_tuple(row[0], row[1], row[2]);
    const double expected = std::stod(row[csv.col("expected_global")]);
    const long t = std::stol(row[csv.col("t")]);
    CHECK(t == last_t[key] + 1);
    last_t[key] = t;
    cum1[key] += a1 * opt - expected;
    cum2[key] += a2 * opt - expected;
    CHECK(std::stod(row[csv.col("cum_alpha1_regret")]) == Approx(cum1[key]).epsilon(1e-9));
    CHECK(std::stod(row[csv.col("cum_alpha2_regret")]) == Approx(cum2[key]).epsilon(1e-9));
    const double frac = std::stod(row[csv.col("fraction_of_optimal")]);
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0 + 1e-12);
    CHECK(frac == Approx(expected / opt).epsilon(1e-12));
  }
  for (const auto& [key, t] : last_t) CHECK(t == 60);
}

TEST_CASE("bipartite run with theta known has zero regret") {
  ExperimentConfig cfg = small_run();
  cfg.graph = {GraphFamily::matching, 4, 0.6};
  cfg.sigma = 0.0;
  cfg.radius_override = 0.0;
  cfg.preload_theta_star = true;
  cfg.policies = {PolicyKind::oful};
  const Csv csv = parse(cmd_run(cfg).csv);
  for (const auto& row : csv.rows) CHECK(std::abs(std::stod(row[csv.col("cum_regret")])) <= 1e-9);
}

TEST_CASE("output does not depend on the thread count") {
  const ExperimentConfig cfg = small_run();
  omp_set_num_threads(1);
  const std::string one = cmd_run(cfg).csv;
  omp_set_num_threads(3);
  const std::string three = cmd_run(cfg).csv;
  CHECK(one == three);
  CHECK(cmd_run(cfg).csv == one);

  ExperimentConfig other = cfg;
  other.seed = 12;
  CHECK(cmd_run(other).csv != one);
}

TEST_CASE("budget refusal propagates from run") {
  ExperimentConfig cfg = small_run();
  cfg.budget = 10;
  CHECK_THROWS_AS(cmd_run(cfg), BudgetExceeded);
}

TEST_CASE("write_output") {
  const auto dir = std::filesystem::temp_directory_path() / "gbb_test_write_output";
  std::filesystem::remove_all(dir);
  const ExperimentOutput out = cmd_table1(default_config("table1"));
  write_output(out, dir);
  std::ifstream csv(dir / "table1.csv");
  std::stringstream text;
  text << csv.rdbuf();
  CHECK(text.str() == out.csv);
  std::ifstream meta(dir / "table1.meta.json");
  const json j = json::parse(meta);
  CHECK(j["schema_version"] == kCsvSchemaVersion);
  CHECK(j["csv_header"] == std::string(kTable1Header));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
