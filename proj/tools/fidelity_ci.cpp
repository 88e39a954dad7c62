// fidelity_ci: credible intervals for the average fidelity of unsampled
// entangled qubit pairs, plus the Monte Carlo experiment drivers.
//
// Data goes to stdout (or --out); errors go to stderr as single-line
// JSON. Exit codes: 0 ok, 2 validation error, 3 insufficient accepted
// trials.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fidest/experiments.hpp"
#include "fidest/interval.hpp"
#include "fidest/noise.hpp"
#include "fidest/simulator.hpp"

namespace {

using fidest::SampleSummary;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitInsufficientData = 3;

json interval_to_json(const fidest::CredibleInterval& interval) {
  json j;
  j["kind"] = fidest::to_string(interval.kind);
  if (interval.kind == fidest::IntervalKind::general) {
    j["moment_order"] = interval.moment_order;
  }
  j["credible_level"] = interval.credible_level;
  j["center"] = interval.center;
  j["radius"] = interval.radius;
  j["lower_raw"] = interval.lower_raw;
  j["upper_raw"] = interval.upper_raw;
  j["lower"] = interval.lower();
  j["upper"] = interval.upper();
  return j;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + out_path);
  }
  out << text;
}

struct SummaryFlags {
  long long n_total = 0;
  long long n_measured = 0;
  long long errors = -1;
  double qber = -1.0;

  SampleSummary resolve() const {
    long long e = errors;
    if (e < 0 && qber >= 0.0) {
      e = std::llround(qber * static_cast<double>(n_measured));
    }
    if (e < 0) {
      throw std::invalid_argument("one of --errors or --qber is required");
    }
    return SampleSummary(n_total, n_measured, e);
  }
};

int cmd_estimate(const SummaryFlags& flags, double alpha,
                 std::optional<int> order_override,
                 const std::string& out_path) {
  const SampleSummary summary = flags.resolve();
  std::vector<std::string> warnings;

  const int t_star = fidest::optimal_moment_order(alpha);
  const int order = order_override.value_or(t_star);
  const auto general =
      fidest::credible_interval_general(summary, alpha, order);
  const auto general_t2 = fidest::credible_interval_general(summary, alpha, 2);
  const auto iid_exact = fidest::iid_interval_exact(summary, alpha);
  const auto iid_asym =
      fidest::iid_interval_asymptotic(summary, alpha, &warnings);
  const auto stderr_int = fidest::standard_error_interval(summary);
  const auto decomposition = fidest::radius_decomposition(summary, alpha);
  const long long threshold =
      fidest::excessive_measurement_threshold(summary.n_total);

  json report;
  report["input"] = {{"n_total", summary.n_total},
                     {"n_measured", summary.n_measured},
                     {"errors_measured", summary.errors_measured},
                     {"alpha", alpha}};
  report["qber_measured"] = summary.qber_measured();
  report["posterior_mean_qber"] = fidest::posterior_mean(summary);
  report["center"] = fidest::center_estimate(summary);
  report["t_star"] = t_star;
  report["moment_order_used"] = order;
  report["intervals"] = {{"general", interval_to_json(general)},
                         {"general_t2", interval_to_json(general_t2)},
                         {"iid_exact", interval_to_json(iid_exact)},
                         {"iid_asymptotic", interval_to_json(iid_asym)},
                         {"standard_error", interval_to_json(stderr_int)}};
  report["radius_decomposition"] = {
      {"measurement_term", decomposition.measurement_term},
      {"tail_term_general", decomposition.tail_term_general},
      {"tail_term_iid", decomposition.tail_term_iid},
      {"atypicality_term", decomposition.atypicality_term},
      {"cramer_rao_reference", decomposition.cramer_rao_reference}};
  report["excessive_measurement_threshold"] = threshold;
  report["measurements_excessive"] = summary.n_measured >= threshold;
  report["warnings"] = warnings;

  emit(report.dump(2) + "\n", out_path);
  return 0;
}

int cmd_moments(const SummaryFlags& flags, int order,
                const std::string& out_path) {
  const SampleSummary summary = flags.resolve();
  const auto moments = fidest::central_moments_direct(summary, order);
  json report;
  report["input"] = {{"n_total", summary.n_total},
                     {"n_measured", summary.n_measured},
                     {"errors_measured", summary.errors_measured}};
  report["mean_unsampled_qber"] = moments.mean_unsampled_qber;
  report["max_order"] = moments.max_order;
  report["central_moments"] = moments.central_moments;
  report["variance_closed_form"] = fidest::variance_closed_form(summary);
  emit(report.dump(2) + "\n", out_path);
  return 0;
}

int cmd_iid(const SummaryFlags& flags, double alpha,
            const std::string& out_path) {
  const SampleSummary summary = flags.resolve();
  std::vector<std::string> warnings;
  json report;
  report["input"] = {{"n_total", summary.n_total},
                     {"n_measured", summary.n_measured},
                     {"errors_measured", summary.errors_measured},
                     {"alpha", alpha}};
  report["intervals"] = {
      {"iid_exact", interval_to_json(fidest::iid_interval_exact(summary,
                                                                alpha))},
      {"iid_asymptotic",
       interval_to_json(
           fidest::iid_interval_asymptotic(summary, alpha, &warnings))}};
  report["warnings"] = warnings;
  emit(report.dump(2) + "\n", out_path);
  return 0;
}

int cmd_figure(const fidest::ExperimentConfig& config,
               const std::string& format, const std::string& out_path) {
  const fidest::Table table = fidest::run_experiment(config);
  std::ostringstream buf;
  if (format == "csv") {
    fidest::write_csv(table, buf);
  } else if (format == "json") {
    fidest::write_json(table, buf);
  } else {
    throw std::invalid_argument("format must be csv or json");
  }
  emit(buf.str(), out_path);
  return 0;
}

int cmd_simulate(const std::string& model_path, long long n_measured,
                 double alpha, const std::vector<std::string>& estimator_names,
                 long long n_trials, std::uint64_t seed,
                 const std::string& out_path) {
  const fidest::NoiseModel model = fidest::load_noise_model(model_path);
  std::vector<fidest::Estimator> estimators;
  for (const auto& name : estimator_names) {
    if (name == "general") {
      estimators.push_back(fidest::Estimator::general);
    } else if (name == "iid_exact") {
      estimators.push_back(fidest::Estimator::iid_exact);
    } else if (name == "iid_asymptotic") {
      estimators.push_back(fidest::Estimator::iid_asymptotic);
    } else if (name == "standard_error") {
      estimators.push_back(fidest::Estimator::standard_error);
    } else {
      throw std::invalid_argument(
          "unknown estimator '" + name +
          "' (expected general, iid_exact, iid_asymptotic, standard_error)");
    }
  }
  const fidest::CoverageResult result = fidest::coverage_experiment(
      model, n_measured, alpha, estimators, n_trials, seed);

  json report;
  report["model"] = {{"variant", model.variant()},
                     {"n_total", model.n_total()}};
  report["n_measured"] = n_measured;
  report["alpha"] = alpha;
  report["n_trials"] = result.n_trials;
  report["seed"] = seed;
  json per;
  for (const auto& [estimator, coverage] : result.per_estimator) {
    per[fidest::to_string(estimator)] = {{"coverage", coverage.coverage},
                                         {"std_error", coverage.std_error}};
  }
  report["coverage"] = per;
  emit(report.dump(2) + "\n", out_path);
  return 0;
}

int fail(int code, const std::string& kind, const std::string& message) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Credible-interval estimation of entangled-pair fidelity under "
      "general noise"};
  app.require_subcommand(1);

  SummaryFlags flags;
  double alpha = 0.95;
  std::optional<int> order_override;
  std::string out_path;
  std::string format = "csv";
  long long n_trials = 10000;
  std::uint64_t seed = 1;

  auto add_summary_flags = [&](CLI::App* cmd, bool need_n) {
    auto* n = cmd->add_option("--n", flags.n_total, "total qubit pairs N");
    if (need_n) {
      n->required();
    }
    cmd->add_option("--m", flags.n_measured, "measured qubit pairs M")
        ->required();
    auto* e = cmd->add_option("--errors", flags.errors,
                              "observed mismatch count e_M");
    cmd->add_option("--qber", flags.qber, "observed QBER e_M/M")
        ->excludes(e);
  };

  auto* estimate = app.add_subcommand(
      "estimate", "interval estimates from one measurement round");
  add_summary_flags(estimate, true);
  estimate->add_option("--alpha", alpha, "credible level")->
      default_val(0.95);
  int order_flag = 0;
  estimate->add_option("--T", order_flag,
                       "override the maximum computed moment T*");
  estimate->add_option("--out", out_path, "write the report here");

  auto* moments = app.add_subcommand(
      "moments", "posterior mean and even central moments");
  add_summary_flags(moments, true);
  int moments_order = 6;
  moments->add_option("--order", moments_order, "maximum moment order")
      ->default_val(6);
  moments->add_option("--out", out_path, "write the report here");

  auto* iid = app.add_subcommand("iid", "baseline i.i.d. intervals only");
  add_summary_flags(iid, false);
  iid->add_option("--alpha", alpha, "credible level")->default_val(0.95);
  iid->add_option("--out", out_path, "write the report here");

  auto* figure = app.add_subcommand(
      "figure", "emit an experiment's data series (CSV or JSON)");
  std::string experiment_id;
  std::vector<std::string> override_pairs;
  figure->add_option("id", experiment_id, "one of fig1..fig7, table2")
      ->required();
  figure->add_option("--trials", n_trials, "Monte Carlo trials per cell");
  figure->add_option("--seed", seed, "base RNG seed")->default_val(1);
  figure->add_option("--set", override_pairs,
                     "experiment parameter override key=value");
  figure->add_option("--format", format, "csv or json")->default_val("csv");
  figure->add_option("--out", out_path, "write the series here");

  auto* simulate = app.add_subcommand(
      "simulate", "coverage experiment over a noise-model config");
  std::string model_path;
  std::vector<std::string> estimator_names{"general", "iid_exact"};
  simulate->add_option("--model", model_path, "noise model JSON file")
      ->required();
  simulate->add_option("--m", flags.n_measured, "measured qubit pairs M")
      ->required();
  simulate->add_option("--alpha", alpha, "credible level")->default_val(0.95);
  simulate->add_option("--estimators", estimator_names,
                       "estimators to evaluate")
      ->delimiter(',');
  simulate->add_option("--trials", n_trials, "Monte Carlo trials")
      ->default_val(10000);
  simulate->add_option("--seed", seed, "RNG seed")->default_val(1);
  simulate->add_option("--out", out_path, "write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate->parsed()) {
      if (estimate->count("--T") > 0) {
        if (order_flag < 2 || order_flag % 2 != 0) {
          throw std::invalid_argument("--T must be an even integer >= 2");
        }
        order_override = order_flag;
      }
      return cmd_estimate(flags, alpha, order_override, out_path);
    }
    if (moments->parsed()) {
      return cmd_moments(flags, moments_order, out_path);
    }
    if (iid->parsed()) {
      if (iid->count("--n") == 0) {
        flags.n_total = flags.n_measured + 1;  // bookkeeping only
      }
      return cmd_iid(flags, alpha, out_path);
    }
    if (figure->parsed()) {
      fidest::ExperimentConfig config;
      config.id = experiment_id;
      config.seed = seed;
      if (figure->count("--trials") > 0) {
        config.n_trials = n_trials;
      }
      for (const auto& pair : override_pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw std::invalid_argument("--set expects key=value, got '" +
                                      pair + "'");
        }
        config.overrides[pair.substr(0, eq)] = pair.substr(eq + 1);
      }
      return cmd_figure(config, format, out_path);
    }
    if (simulate->parsed()) {
      return cmd_simulate(model_path, flags.n_measured, alpha,
                          estimator_names, n_trials, seed, out_path);
    }
  } catch (const fidest::InsufficientDataError& err) {
    return fail(kExitInsufficientData, "insufficient_data", err.what());
  } catch (const fidest::ConfigError& err) {
    return fail(kExitValidation, "config", err.what());
  } catch (const std::invalid_argument& err) {
    return fail(kExitValidation, "validation", err.what());
  } catch (const std::domain_error& err) {
    return fail(kExitValidation, "validation", err.what());
  } catch (const std::out_of_range& err) {
    return fail(kExitValidation, "validation", err.what());
  } catch (const std::exception& err) {
    return fail(kExitValidation, "error", err.what());
  }
  return 0;
}
