#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "fidest/experiments.hpp"
#include "fidest/simulator.hpp"

using namespace fidest;

TEST_CASE("format_number is stable under re-parsing") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> mag(-12.0, 12.0);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = mant(gen) * std::pow(10.0, mag(gen));
    const std::string once = format_number(x);
    const double parsed = std::strtod(once.c_str(), nullptr);
    CHECK(format_number(parsed) == once);
  }
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1e-4) == "0.0001");
}

TEST_CASE("csv and json writers") {
  Table table;
  table.columns = {"name", "k", "x"};
  table.rows.push_back({std::string("a"), 3LL, 0.5});
  table.rows.push_back({std::string("b"), -1LL, 1.0 / 3.0});
  std::ostringstream csv;
  write_csv(table, csv);
  CHECK(csv.str() ==
        "name,k,x\na,3,0.5\nb,-1,0.333333333333\n");
  std::ostringstream json;
  write_json(table, json);
  CHECK(json.str() ==
        "{\"columns\":[\"name\",\"k\",\"x\"],"
        "\"rows\":[[\"a\",3,0.5],[\"b\",-1,0.333333333333]]}\n");
}

TEST_CASE("csv round-trips through parse and re-format") {
  ExperimentConfig config;
  config.id = "fig2";
  const Table table = run_experiment(config);
  std::ostringstream first;
  write_csv(table, first);

  // parse every numeric cell back and re-format: identical text
  std::istringstream in(first.str());
  std::string line;
  std::getline(in, line);  // header
  std::ostringstream second;
  second << line << "\n";
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    bool leading = true;
    while (std::getline(cells, cell, ',')) {
      second << (leading ? "" : ",");
      leading = false;
      if (cell.empty()) {
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() && *end == '\0') {
        second << format_number(v);
      } else {
        second << cell;
      }
    }
    second << "\n";
  }
  CHECK(second.str() == first.str());
}

TEST_CASE("table2 experiment emits the exact pairs") {
  ExperimentConfig config;
  config.id = "table2";
  const Table table = run_experiment(config);
  REQUIRE(table.rows.size() == 5);
  const long long want[5][2] = {{80, 4}, {90, 6}, {95, 6}, {98, 8}, {99, 10}};
  for (size_t r = 0; r < 5; ++r) {
    CHECK(std::llround(std::get<double>(table.rows[r][0]) * 100) ==
          want[r][0]);
    CHECK(std::get<long long>(table.rows[r][1]) == want[r][1]);
  }
}

TEST_CASE("fig2 series carries the headline width ratio") {
  ExperimentConfig config;
  config.id = "fig2";
  const Table table = run_experiment(config);
  bool found = false;
  for (const auto& row : table.rows) {
    if (std::fabs(std::get<double>(row[0]) - 0.99) < 1e-9) {
      const double radius_t2 = std::get<double>(row[2]);
      const double radius_t_star = std::get<double>(row[5]);
      const double ratio = radius_t2 / radius_t_star;
      CHECK(ratio > 2.9);
      CHECK(ratio < 3.2);
      // iid radius lower-bounds the general ones
      CHECK(std::get<double>(row[6]) <= radius_t_star);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("fig4 normalized radius attains its minimum at the half ratio") {
  ExperimentConfig config;
  config.id = "fig4";
  config.overrides["n_values"] = "2000";
  config.overrides["alpha_values"] = "0.95";
  config.overrides["qber_values"] = "0.1;0.3";
  const Table table = run_experiment(config);
  double best = 1e300;
  double best_ratio = 0.0;
  for (const auto& row : table.rows) {
    const double qber = std::get<double>(row[2]);
    if (std::fabs(qber - 0.1) > 1e-12) {
      continue;
    }
    const double ratio = std::get<double>(row[3]);
    const double normalized = std::get<double>(row[5]);
    if (std::fabs(ratio - 0.5) < 1e-12) {
      CHECK(normalized == 1.0);
    }
    if (normalized < best) {
      best = normalized;
      best_ratio = ratio;
    }
  }
  CHECK(best_ratio == 0.5);
}

TEST_CASE("fig3 emits one dispersing series per N") {
  ExperimentConfig config;
  config.id = "fig3";
  config.overrides["n_values"] = "1200,2000";
  const Table table = run_experiment(config);
  bool saw_1200 = false;
  bool saw_2000 = false;
  double total_1200 = 0.0;
  for (const auto& row : table.rows) {
    const long long n = std::get<long long>(row[0]);
    saw_1200 = saw_1200 || n == 1200;
    saw_2000 = saw_2000 || n == 2000;
    if (n == 1200) {
      total_1200 += std::get<double>(row[3]);
    }
  }
  CHECK(saw_1200);
  CHECK(saw_2000);
  CHECK(total_1200 > 0.999);  // trimmed tails only
  CHECK(total_1200 <= 1.0 + 1e-9);
}

TEST_CASE("experiments are deterministic for a fixed seed") {
  ExperimentConfig config;
  config.id = "fig1";
  config.n_trials = 1000;
  config.seed = 99;
  config.overrides["n_total"] = "1000";
  config.overrides["n_measured"] = "900";
  config.overrides["bins"] = "20";
  std::ostringstream a;
  write_csv(run_experiment(config), a);
  std::ostringstream b;
  write_csv(run_experiment(config), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("stderr_coverage") != std::string::npos);

  config.seed = 100;
  std::ostringstream c;
  write_csv(run_experiment(config), c);
  CHECK(a.str() != c.str());
}

TEST_CASE("config validation") {
  ExperimentConfig config;
  config.id = "nope";
  CHECK_THROWS_AS(run_experiment(config), ConfigError);

  config.id = "table2";
  config.overrides["bogus"] = "1";
  CHECK_THROWS_AS(run_experiment(config), ConfigError);

  config = ExperimentConfig{};
  config.id = "fig2";
  config.overrides["n_total"] = "many";
  CHECK_THROWS_AS(run_experiment(config), ConfigError);

  config = ExperimentConfig{};
  config.id = "fig4";
  config.overrides["qber_values"] = "0.1;;";
  CHECK_THROWS_AS(run_experiment(config), ConfigError);
}

TEST_CASE("fig7 exact order never exceeds the formula order") {
  ExperimentConfig config;
  config.id = "fig7";
  const Table table = run_experiment(config);
  CHECK(table.rows.size() > 50);
  for (const auto& row : table.rows) {
    CHECK(std::get<long long>(row[5]) <= std::get<long long>(row[4]));
  }
}
