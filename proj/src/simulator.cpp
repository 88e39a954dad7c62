#include "fidest/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "fidest/rng.hpp"

namespace fidest {

namespace {

void check_trial_args(const NoiseModel& model, long long n_measured) {
  if (n_measured < 1 || n_measured >= model.n_total()) {
    throw std::invalid_argument("n_measured must be in [1, n_total)");
  }
}

int draw_branch(const NoiseModel& model, TrialRng& rng) {
  const auto& branches = model.branches();
  if (branches.size() == 1) {
    return 0;
  }
  // All current models have equiprobable branches; draw generically.
  double u = rng.next_unit();
  for (size_t i = 0; i + 1 < branches.size(); ++i) {
    if (u < branches[i].probability) {
      return static_cast<int>(i);
    }
    u -= branches[i].probability;
  }
  return static_cast<int>(branches.size()) - 1;
}

}  // namespace

const char* to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::general:
      return "general";
    case Estimator::iid_exact:
      return "iid_exact";
    case Estimator::iid_asymptotic:
      return "iid_asymptotic";
    case Estimator::standard_error:
      return "standard_error";
  }
  return "unknown";
}

TrialRecord run_trial(const NoiseModel& model, long long n_measured,
                      std::uint64_t seed, std::uint64_t trial_index) {
  check_trial_args(model, n_measured);
  TrialRng rng(seed, trial_index);
  const long long n = model.n_total();

  TrialRecord record;
  record.branch = draw_branch(model, rng);

  // sample set: partial Fisher-Yates over 0..N-1
  std::vector<long long> indices(static_cast<size_t>(n));
  std::iota(indices.begin(), indices.end(), 0LL);
  record.sample_set.resize(static_cast<size_t>(n_measured));
  for (long long i = 0; i < n_measured; ++i) {
    const long long j =
        i + static_cast<long long>(rng.next_below(
                static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<size_t>(i)], indices[static_cast<size_t>(j)]);
    record.sample_set[static_cast<size_t>(i)] = indices[static_cast<size_t>(i)];
  }

  record.bases.resize(static_cast<size_t>(n_measured));
  record.outcomes.resize(static_cast<size_t>(n_measured));
  long long errors = 0;
  for (long long i = 0; i < n_measured; ++i) {
    const auto basis = static_cast<std::uint8_t>(rng.next_below(3));
    const PairState& state =
        model.state_of(record.branch, record.sample_set[static_cast<size_t>(i)]);
    const bool match = rng.next_bernoulli(state.match_prob[basis]);
    record.bases[static_cast<size_t>(i)] = basis;
    record.outcomes[static_cast<size_t>(i)] = match ? 1 : 0;
    errors += match ? 1 : 0;
  }
  record.errors_measured = errors;
  record.qber_measured =
      static_cast<double>(errors) / static_cast<double>(n_measured);
  record.true_fidelity_unsampled = true_unsampled_fidelity(model, record);
  return record;
}

double true_unsampled_fidelity(const NoiseModel& model,
                               const TrialRecord& record) {
  const auto& branches = model.branches();
  const long long n = model.n_total();
  const auto m = static_cast<long long>(record.sample_set.size());
  if (record.outcomes.size() != record.sample_set.size() ||
      record.bases.size() != record.sample_set.size() || m >= n) {
    throw std::invalid_argument("record is inconsistent with the model");
  }
  const double n_unsampled = static_cast<double>(n - m);

  // log-likelihood of the outcomes under each branch
  std::vector<double> log_like(branches.size(), 0.0);
  std::vector<double> sampled_fid(branches.size(), 0.0);
  for (size_t x = 0; x < branches.size(); ++x) {
    double ll = std::log(branches[x].probability);
    double fid = 0.0;
    for (size_t i = 0; i < record.sample_set.size(); ++i) {
      const PairState& state =
          model.state_of(static_cast<int>(x), record.sample_set[i]);
      const double p = state.match_prob[record.bases[i]];
      ll += record.outcomes[i] ? std::log(p) : std::log1p(-p);
      fid += state.fidelity;
    }
    log_like[x] = ll;
    sampled_fid[x] = fid;
  }

  const double max_ll = *std::max_element(log_like.begin(), log_like.end());
  if (!std::isfinite(max_ll)) {
    throw std::invalid_argument(
        "record has zero likelihood under every branch");
  }
  double norm = 0.0;
  double fbar = 0.0;
  for (size_t x = 0; x < branches.size(); ++x) {
    const double w = std::exp(log_like[x] - max_ll);
    const double branch_total =
        model.branch_mean_fidelity(static_cast<int>(x)) *
        static_cast<double>(n);
    norm += w;
    fbar += w * (branch_total - sampled_fid[x]) / n_unsampled;
  }
  return fbar / norm;
}

int simulation_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) {
    n = 1;
  }
  if (const char* cap = std::getenv("FIDELITY_CI_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1 && limit < n) {
      n = limit;
    }
  }
  return n;
}

namespace {

struct TrialOutcome {
  long long errors;
  double true_fidelity;
};

// Runs trials 0..n_trials-1 in parallel; results indexed by trial, so
// aggregation order never depends on scheduling.
std::vector<TrialOutcome> run_trial_batch(const NoiseModel& model,
                                          long long n_measured,
                                          long long n_trials,
                                          std::uint64_t seed) {
  check_trial_args(model, n_measured);
  if (n_trials < 1) {
    throw std::invalid_argument("n_trials must be >= 1");
  }
  std::vector<TrialOutcome> outcomes(static_cast<size_t>(n_trials));
  const int n_threads = simulation_thread_count();
  auto worker = [&](long long begin, long long end) {
    for (long long i = begin; i < end; ++i) {
      const TrialRecord record =
          run_trial(model, n_measured, seed, static_cast<std::uint64_t>(i));
      outcomes[static_cast<size_t>(i)] =
          TrialOutcome{record.errors_measured, record.true_fidelity_unsampled};
    }
  };
  if (n_threads == 1 || n_trials < 64) {
    worker(0, n_trials);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (n_trials + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const long long begin = t * chunk;
      const long long end = std::min(n_trials, begin + chunk);
      if (begin >= end) {
        break;
      }
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  return outcomes;
}

CredibleInterval build_interval(Estimator estimator,
                                const SampleSummary& summary, double alpha) {
  switch (estimator) {
    case Estimator::general:
      return credible_interval_general(summary, alpha);
    case Estimator::iid_exact:
      return iid_interval_exact(summary, alpha);
    case Estimator::iid_asymptotic:
      return iid_interval_asymptotic(summary, alpha);
    case Estimator::standard_error:
      return standard_error_interval(summary);
  }
  throw std::invalid_argument("unknown estimator");
}

}  // namespace

CoverageResult coverage_experiment(const NoiseModel& model,
                                   long long n_measured, double alpha,
                                   const std::vector<Estimator>& estimators,
                                   long long n_trials, std::uint64_t seed) {
  if (estimators.empty()) {
    throw std::invalid_argument("estimator set must not be empty");
  }
  if (n_trials < 1000) {
    throw std::invalid_argument(
        "coverage estimates need n_trials >= 1000");
  }
  const auto outcomes = run_trial_batch(model, n_measured, n_trials, seed);

  // intervals depend on the trial only through e_M; memoize per value
  std::map<long long, std::vector<CredibleInterval>> intervals;
  for (const auto& outcome : outcomes) {
    intervals.emplace(outcome.errors, std::vector<CredibleInterval>{});
  }
  for (auto& [errors, cached] : intervals) {
    const SampleSummary summary(model.n_total(), n_measured, errors);
    cached.reserve(estimators.size());
    for (const Estimator estimator : estimators) {
      cached.push_back(build_interval(estimator, summary, alpha));
    }
  }

  std::vector<long long> hits(estimators.size(), 0);
  for (const auto& outcome : outcomes) {
    const auto& cached = intervals.at(outcome.errors);
    for (size_t k = 0; k < cached.size(); ++k) {
      hits[k] += cached[k].contains(outcome.true_fidelity) ? 1 : 0;
    }
  }

  CoverageResult result;
  result.n_trials = n_trials;
  for (size_t k = 0; k < estimators.size(); ++k) {
    const double p =
        static_cast<double>(hits[k]) / static_cast<double>(n_trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_trials));
    result.per_estimator[estimators[k]] = EstimatorCoverage{p, se};
  }
  return result;
}

PercentileInterval conditional_percentile_interval(
    const NoiseModel& model, long long n_measured, long long target_errors,
    double alpha, long long n_trials, std::uint64_t seed, int tolerance) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("alpha must be in (0, 1)");
  }
  if (target_errors < 0 || target_errors > n_measured) {
    throw std::invalid_argument("target_errors must be in [0, n_measured]");
  }
  const auto outcomes = run_trial_batch(model, n_measured, n_trials, seed);

  std::vector<double> accepted;
  for (const auto& outcome : outcomes) {
    if (std::llabs(outcome.errors - target_errors) <= tolerance) {
      accepted.push_back(outcome.true_fidelity);
    }
  }
  if (accepted.size() < 100) {
    throw InsufficientDataError(
        "conditional_percentile_interval: only " +
        std::to_string(accepted.size()) +
        " trials matched the target error count; increase n_trials");
  }
  std::sort(accepted.begin(), accepted.end());
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(accepted.size() - 1);
    const auto lo = static_cast<size_t>(h);
    const size_t hi = std::min(lo + 1, accepted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return accepted[lo] + frac * (accepted[hi] - accepted[lo]);
  };
  const double tail = 0.5 * (1.0 - alpha);
  return PercentileInterval{quantile(tail), quantile(1.0 - tail),
                            static_cast<long long>(accepted.size())};
}

ErrorDistribution error_distribution(const NoiseModel& model,
                                     long long n_measured, long long n_trials,
                                     std::uint64_t seed, int n_bins,
                                     double alpha) {
  if (n_bins < 1) {
    throw std::invalid_argument("n_bins must be >= 1");
  }
  if (n_trials < 1000) {
    throw std::invalid_argument(
        "coverage estimates need n_trials >= 1000");
  }
  const auto outcomes = run_trial_batch(model, n_measured, n_trials, seed);

  struct PerErrors {
    double center;
    CredibleInterval stderr_interval;
    CredibleInterval general_interval;
  };
  std::map<long long, PerErrors> cache;
  for (const auto& outcome : outcomes) {
    if (cache.count(outcome.errors) == 0) {
      const SampleSummary summary(model.n_total(), n_measured, outcome.errors);
      cache.emplace(outcome.errors,
                    PerErrors{center_estimate(summary),
                              standard_error_interval(summary),
                              credible_interval_general(summary, alpha)});
    }
  }

  std::vector<double> errors_of_estimate;
  errors_of_estimate.reserve(outcomes.size());
  long long stderr_hits = 0;
  long long general_hits = 0;
  for (const auto& outcome : outcomes) {
    const PerErrors& entry = cache.at(outcome.errors);
    errors_of_estimate.push_back(entry.center - outcome.true_fidelity);
    stderr_hits += entry.stderr_interval.contains(outcome.true_fidelity);
    general_hits += entry.general_interval.contains(outcome.true_fidelity);
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(errors_of_estimate.begin(), errors_of_estimate.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5e-6;
    hi += 0.5e-6;
  }

  ErrorDistribution dist;
  dist.n_trials = n_trials;
  dist.bin_edges.resize(static_cast<size_t>(n_bins) + 1);
  for (int b = 0; b <= n_bins; ++b) {
    dist.bin_edges[static_cast<size_t>(b)] =
        lo + (hi - lo) * static_cast<double>(b) / n_bins;
  }
  dist.bin_counts.assign(static_cast<size_t>(n_bins), 0);
  for (const double err : errors_of_estimate) {
    auto bin = static_cast<long long>((err - lo) / (hi - lo) * n_bins);
    bin = std::clamp<long long>(bin, 0, n_bins - 1);
    ++dist.bin_counts[static_cast<size_t>(bin)];
  }
  dist.stderr_coverage =
      static_cast<double>(stderr_hits) / static_cast<double>(n_trials);
  dist.general_coverage =
      static_cast<double>(general_hits) / static_cast<double>(n_trials);
  return dist;
}

}  // namespace fidest
