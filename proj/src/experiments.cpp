#include "fidest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "fidest/interval.hpp"
#include "fidest/rng.hpp"
#include "fidest/simulator.hpp"

namespace fidest {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<long long>(cell)) {
    return std::to_string(std::get<long long>(cell));
  }
  if (std::holds_alternative<double>(cell)) {
    return format_number(std::get<double>(cell));
  }
  return std::get<std::string>(cell);
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << cell_text(row[c]);
    }
    out << "\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  out << "{\"columns\":[";
  for (size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << '"' << table.columns[c] << '"';
  }
  out << "],\"rows\":[";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? "," : "") << '[';
    const auto& row = table.rows[r];
    for (size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "");
      if (std::holds_alternative<std::string>(row[c])) {
        out << '"' << std::get<std::string>(row[c]) << '"';
      } else {
        out << cell_text(row[c]);
      }
    }
    out << ']';
  }
  out << "]}\n";
}

namespace {

// ---- override handling -------------------------------------------------

class Overrides {
 public:
  explicit Overrides(const ExperimentConfig& config)
      : values_(config.overrides) {}

  long long get_int(const std::string& key, long long fallback) {
    auto it = take(key);
    if (it == values_.end()) return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0') {
      throw ConfigError("override " + key + ": expected an integer, got '" +
                        it->second + "'");
    }
    return v;
  }

  double get_real(const std::string& key, double fallback) {
    auto it = take(key);
    if (it == values_.end()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') {
      throw ConfigError("override " + key + ": expected a number, got '" +
                        it->second + "'");
    }
    return v;
  }

  // semicolon- or comma-separated list of numbers
  std::vector<double> get_real_list(const std::string& key,
                                    std::vector<double> fallback) {
    auto it = take(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream in(it->second);
    const char delim =
        it->second.find(';') != std::string::npos ? ';' : ',';
    while (std::getline(in, item, delim)) {
      char* end = nullptr;
      const double v = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0') {
        throw ConfigError("override " + key + ": expected numbers, got '" +
                          item + "'");
      }
      out.push_back(v);
    }
    if (out.empty()) {
      throw ConfigError("override " + key + ": empty list");
    }
    return out;
  }

  // call after all gets: every remaining key is unknown
  void finish(const std::string& experiment) {
    for (const auto& [key, value] : values_) {
      if (used_.count(key) == 0) {
        throw ConfigError("override " + key + " is not recognized by " +
                          experiment);
      }
    }
  }

 private:
  std::map<std::string, std::string>::const_iterator take(
      const std::string& key) {
    used_.insert(key);
    return values_.find(key) == values_.end() ? values_.end()
                                              : values_.find(key);
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell) {
  SplitMix64 sm(base ^ (0x9E3779B97F4A7C15ULL * (cell + 1)));
  return sm.next();
}

long long trials_or(const ExperimentConfig& config, long long fallback) {
  return config.n_trials > 0 ? config.n_trials : fallback;
}

// Mixture parameters for a given heterogeneity degree d, chosen so the
// expected overall QBER stays at 0.10 for every d with the default
// q = (0.81, 0.79): p_good = 0.2(1 - d), p_bad = p_good + d.
void mixture_probs(double d, double* p_good, double* p_bad) {
  if (!(d >= 0.0) || !(d <= 1.0)) {
    throw ConfigError("heterogeneity degree d must be in [0, 1]");
  }
  *p_good = 0.2 * (1.0 - d);
  *p_bad = *p_good + d;
}

// ---- individual experiments --------------------------------------------

Table experiment_table2(const ExperimentConfig& config) {
  Overrides ov(config);
  ov.finish("table2");
  Table table;
  table.columns = {"alpha", "t_star"};
  for (const double alpha : {0.80, 0.90, 0.95, 0.98, 0.99}) {
    table.rows.push_back(
        {alpha, static_cast<long long>(optimal_moment_order(alpha))});
  }
  return table;
}

Table experiment_fig1(const ExperimentConfig& config) {
  Overrides ov(config);
  const long long n = ov.get_int("n_total", 10000);
  const long long m = ov.get_int("n_measured", 9000);
  const double f_all = ov.get_real("f_all", 0.9);
  const double alpha = ov.get_real("alpha", 0.95);
  const long long bins = ov.get_int("bins", 60);
  ov.finish("fig1");
  const long long trials = trials_or(config, 10000);

  const PairState mixed = mix_states(psi_minus_state(), zero_zero_state(),
                                     f_all);
  const NoiseModel iid =
      NoiseModel::heterogeneous_block(n, 1.0, mixed, zero_zero_state());
  const NoiseModel het = NoiseModel::heterogeneous_block(
      n, f_all, psi_minus_state(), zero_zero_state());

  Table table;
  table.columns = {"model", "record", "lower", "upper", "count", "value"};
  const char* names[2] = {"iid", "heterogeneous"};
  const NoiseModel* models[2] = {&iid, &het};
  for (int k = 0; k < 2; ++k) {
    const ErrorDistribution dist =
        error_distribution(*models[k], m, trials, derive_seed(config.seed, k),
                           static_cast<int>(bins), alpha);
    for (size_t b = 0; b < dist.bin_counts.size(); ++b) {
      table.rows.push_back({std::string(names[k]), std::string("bin"),
                            dist.bin_edges[b], dist.bin_edges[b + 1],
                            dist.bin_counts[b],
                            static_cast<double>(dist.bin_counts[b]) /
                                static_cast<double>(trials)});
    }
    table.rows.push_back({std::string(names[k]),
                          std::string("stderr_coverage"), std::string(),
                          std::string(), trials, dist.stderr_coverage});
    table.rows.push_back({std::string(names[k]),
                          std::string("general_coverage"), std::string(),
                          std::string(), trials, dist.general_coverage});
  }
  return table;
}

Table experiment_fig2(const ExperimentConfig& config) {
  Overrides ov(config);
  const long long n = ov.get_int("n_total", 10000);
  const long long m = ov.get_int("n_measured", 1000);
  const long long errors = ov.get_int("errors_measured", 100);
  const double alpha_min = ov.get_real("alpha_min", 0.70);
  const double alpha_max = ov.get_real("alpha_max", 0.995);
  const double alpha_step = ov.get_real("alpha_step", 0.005);
  ov.finish("fig2");

  const SampleSummary summary(n, m, errors);
  // one moment sweep covers every alpha in the grid
  int t_star_max = 6;
  for (double a = alpha_min; a <= alpha_max + 1e-12; a += alpha_step) {
    t_star_max = std::max(t_star_max, optimal_moment_order(a));
  }
  const PosteriorMoments moments = central_moments_direct(summary, t_star_max);
  auto radius_up_to = [&](double alpha, int max_order) {
    double best = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= max_order / 2; ++t) {
      best = std::fmin(best, 1.5 * std::pow(moments.central(t) / (1.0 - alpha),
                                            0.5 / static_cast<double>(t)));
    }
    return best;
  };

  Table table;
  table.columns = {"alpha",         "t_star",
                   "radius_t2",     "radius_t4",
                   "radius_t6",     "radius_t_star",
                   "radius_iid_asymptotic", "radius_iid_exact_half"};
  for (double alpha = alpha_min; alpha <= alpha_max + 1e-12;
       alpha += alpha_step) {
    const int t_star = optimal_moment_order(alpha);
    const CredibleInterval exact = iid_interval_exact(summary, alpha);
    table.rows.push_back({alpha, static_cast<long long>(t_star),
                          radius_up_to(alpha, 2), radius_up_to(alpha, 4),
                          radius_up_to(alpha, 6), radius_up_to(alpha, t_star),
                          iid_interval_asymptotic(summary, alpha).radius,
                          exact.radius});
  }
  return table;
}

Table experiment_fig3(const ExperimentConfig& config) {
  Overrides ov(config);
  const long long m = ov.get_int("n_measured", 1000);
  const long long errors = ov.get_int("errors_measured", 30);
  const double pmf_floor = ov.get_real("pmf_floor", 1e-12);
  const std::vector<double> n_values =
      ov.get_real_list("n_values", {1200, 2000, 5000, 20000});
  ov.finish("fig3");

  Table table;
  table.columns = {"n_total", "e", "epsilon_u", "pmf"};
  for (const double n_real : n_values) {
    const auto n = static_cast<long long>(n_real);
    const SampleSummary summary(n, m, errors);
    const UnsampledErrorPosterior posterior(summary);
    const long long u = summary.n_unsampled();
    for (long long e = 0; e <= u; ++e) {
      const double p = posterior.pmf(e);
      if (p >= pmf_floor) {
        table.rows.push_back({n, e, static_cast<double>(e) / u, p});
      }
    }
  }
  return table;
}

Table experiment_fig4(const ExperimentConfig& config) {
  Overrides ov(config);
  const std::vector<double> n_values =
      ov.get_real_list("n_values", {5000, 10000, 20000});
  const std::vector<double> alphas =
      ov.get_real_list("alpha_values", {0.9, 0.95, 0.99});
  const std::vector<double> qbers =
      ov.get_real_list("qber_values", {0.02, 0.1, 0.3});
  ov.finish("fig4");

  Table table;
  table.columns = {"n_total", "alpha",        "qber",
                   "m_over_n", "radius_t_star", "normalized_radius"};
  for (const double n_real : n_values) {
    const auto n = static_cast<long long>(n_real);
    for (const double alpha : alphas) {
      const int t_star = optimal_moment_order(alpha);
      for (const double qber : qbers) {
        std::vector<double> ratios;
        std::vector<double> radii;
        double radius_at_half = 0.0;
        for (int k = 1; k <= 19; ++k) {
          const double ratio = 0.05 * k;
          const auto m = static_cast<long long>(
              std::llround(ratio * static_cast<double>(n)));
          const auto errors = static_cast<long long>(
              std::llround(qber * static_cast<double>(m)));
          const SampleSummary summary(n, m, errors);
          const double radius = radius_general(summary, alpha, t_star);
          ratios.push_back(ratio);
          radii.push_back(radius);
          if (k == 10) {
            radius_at_half = radius;
          }
        }
        for (size_t i = 0; i < ratios.size(); ++i) {
          table.rows.push_back({n, alpha, qber, ratios[i], radii[i],
                                radii[i] / radius_at_half});
        }
      }
    }
  }
  return table;
}

Table experiment_fig5(const ExperimentConfig& config) {
  Overrides ov(config);
  const long long n = ov.get_int("n_total", 10000);
  const double alpha = ov.get_real("alpha", 0.95);
  const double q_high = ov.get_real("q_high", 0.81);
  const double q_low = ov.get_real("q_low", 0.79);
  const std::vector<double> d_values =
      ov.get_real_list("d_values", {0.0, 0.5, 1.0});
  const long long tolerance = ov.get_int("tolerance", 1);
  ov.finish("fig5");
  const long long trials = trials_or(config, 200000);

  Table table;
  table.columns = {"d", "m", "series", "lower", "upper", "accepted"};
  std::uint64_t cell = 0;
  for (int k = 1; k <= 9; ++k) {
    const long long m = k * (n / 10);
    const auto target = static_cast<long long>(
        std::llround(0.1 * static_cast<double>(m)));
    const SampleSummary summary(n, m, target);
    const CredibleInterval c_iid = iid_interval_exact(summary, alpha);
    const CredibleInterval c_gen = credible_interval_general(summary, alpha);
    table.rows.push_back({std::string(), m, std::string("c_iid"),
                          c_iid.lower_raw, c_iid.upper_raw, std::string()});
    table.rows.push_back({std::string(), m, std::string("c_general"),
                          c_gen.lower_raw, c_gen.upper_raw, std::string()});
    for (const double d : d_values) {
      double p_good = 0.0;
      double p_bad = 0.0;
      mixture_probs(d, &p_good, &p_bad);
      const NoiseModel model =
          NoiseModel::correlated_mixture(n, p_good, p_bad, q_high, q_low);
      const PercentileInterval exact = conditional_percentile_interval(
          model, m, target, alpha, trials, derive_seed(config.seed, cell++),
          static_cast<int>(tolerance));
      std::ostringstream series;
      series << "c_exact_d" << format_number(d);
      table.rows.push_back({d, m, series.str(), exact.lower, exact.upper,
                            exact.accepted});
    }
  }
  return table;
}

Table experiment_fig6(const ExperimentConfig& config, int variant) {
  Overrides ov(config);
  const long long n = ov.get_int("n_total", 10000);
  const double q_high = ov.get_real("q_high", 0.81);
  const double q_low = ov.get_real("q_low", 0.79);
  ov.finish(config.id);
  const long long trials = trials_or(config, 10000);
  const std::vector<Estimator> estimators{Estimator::general,
                                          Estimator::iid_exact};

  Table table;
  std::uint64_t cell = 0;
  auto run_cell = [&](double d, long long m, double alpha, Cell x) {
    double p_good = 0.0;
    double p_bad = 0.0;
    mixture_probs(d, &p_good, &p_bad);
    const NoiseModel model =
        NoiseModel::correlated_mixture(n, p_good, p_bad, q_high, q_low);
    const CoverageResult result = coverage_experiment(
        model, m, alpha, estimators, trials, derive_seed(config.seed, cell++));
    const double nominal_se =
        std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(trials));
    table.rows.push_back(
        {x, result.per_estimator.at(Estimator::general).coverage,
         result.per_estimator.at(Estimator::iid_exact).coverage, nominal_se});
  };

  if (variant == 0) {  // coverage vs number of measurements, d = 1
    table.columns = {"m", "coverage_general", "coverage_iid", "mc_stderr"};
    for (int k = 1; k <= 9; ++k) {
      const long long m = k * (n / 10);
      run_cell(1.0, m, 0.95, m);
    }
  } else if (variant == 1) {  // coverage vs heterogeneity degree, M = 0.9 N
    table.columns = {"d", "coverage_general", "coverage_iid", "mc_stderr"};
    for (int k = 0; k <= 10; ++k) {
      run_cell(0.1 * k, 9 * (n / 10), 0.95, 0.1 * k);
    }
  } else {  // coverage vs credible level, M = 0.5 N, d = 1
    table.columns = {"alpha", "coverage_general", "coverage_iid", "mc_stderr"};
    for (const double alpha : {0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99}) {
      run_cell(1.0, n / 2, alpha, alpha);
    }
  }
  return table;
}

Table experiment_fig7(const ExperimentConfig& config) {
  Overrides ov(config);
  const long long search_limit = ov.get_int("search_limit", 32);
  ov.finish("fig7");

  Table table;
  table.columns = {"n_total", "m",            "alpha",
                   "qber",    "t_star_formula", "t_star_exact"};
  const std::pair<long long, long long> combos[2] = {{2000, 1000},
                                                     {10000, 5000}};
  std::vector<double> alphas;
  for (double a = 0.50; a < 0.951; a += 0.05) {
    alphas.push_back(a);
  }
  alphas.push_back(0.99);
  for (const auto& [n, m] : combos) {
    for (const double alpha : alphas) {
      for (const double qber : {0.02, 0.05, 0.1, 0.2, 0.3, 0.5}) {
        const auto errors = static_cast<long long>(
            std::llround(qber * static_cast<double>(m)));
        const SampleSummary summary(n, m, errors);
        table.rows.push_back(
            {n, m, alpha, qber,
             static_cast<long long>(optimal_moment_order(alpha)),
             static_cast<long long>(exact_optimal_order(
                 summary, alpha, static_cast<int>(search_limit)))});
      }
    }
  }
  return table;
}

}  // namespace

std::vector<std::string> experiment_ids() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5",
          "fig6a", "fig6b", "fig6c", "fig7", "table2"};
}

Table run_experiment(const ExperimentConfig& config) {
  if (config.id == "table2") return experiment_table2(config);
  if (config.id == "fig1") return experiment_fig1(config);
  if (config.id == "fig2") return experiment_fig2(config);
  if (config.id == "fig3") return experiment_fig3(config);
  if (config.id == "fig4") return experiment_fig4(config);
  if (config.id == "fig5") return experiment_fig5(config);
  if (config.id == "fig6a") return experiment_fig6(config, 0);
  if (config.id == "fig6b") return experiment_fig6(config, 1);
  if (config.id == "fig6c") return experiment_fig6(config, 2);
  if (config.id == "fig7") return experiment_fig7(config);
  throw ConfigError("unknown experiment id: " + config.id);
}

}  // namespace fidest
