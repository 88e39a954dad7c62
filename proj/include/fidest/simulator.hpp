#ifndef FIDEST_SIMULATOR_HPP
#define FIDEST_SIMULATOR_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "fidest/interval.hpp"
#include "fidest/noise.hpp"

// Monte Carlo engine for the measurement protocol.
//
// A trial draws a mixture branch, a uniformly random sample set (partial
// Fisher-Yates), one of the three Pauli bases per sampled pair, and a
// match/no-match outcome per pair. The true average fidelity of the
// unsampled pairs conditions on the outcomes through the branch
// posterior only (all branches are products of per-pair states, so
// measurements never disturb unsampled pairs within a branch).
//
// Trials are keyed by (seed, trial_index): results are bit-identical for
// a fixed seed regardless of thread count. Estimators see nothing but
// the SampleSummary of each trial.

namespace fidest {

struct TrialRecord {
  int branch;
  std::vector<long long> sample_set;
  std::vector<std::uint8_t> bases;     // 0 = x, 1 = y, 2 = z
  std::vector<std::uint8_t> outcomes;  // 1 = match (error)
  long long errors_measured;
  double qber_measured;
  double true_fidelity_unsampled;
};

TrialRecord run_trial(const NoiseModel& model, long long n_measured,
                      std::uint64_t seed, std::uint64_t trial_index);

// Posterior-weighted mean fidelity of the unsampled pairs given the
// trial's outcomes (recomputable from any consistent record).
double true_unsampled_fidelity(const NoiseModel& model,
                               const TrialRecord& record);

enum class Estimator {
  general,
  iid_exact,
  iid_asymptotic,
  standard_error,
};

const char* to_string(Estimator estimator);

struct EstimatorCoverage {
  double coverage;
  double std_error;  // binomial, sqrt(p(1-p)/n)
};

struct CoverageResult {
  long long n_trials;
  std::map<Estimator, EstimatorCoverage> per_estimator;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CoverageResult coverage_experiment(const NoiseModel& model,
                                   long long n_measured, double alpha,
                                   const std::vector<Estimator>& estimators,
                                   long long n_trials, std::uint64_t seed);

struct PercentileInterval {
  double lower;
  double upper;
  long long accepted;
};

// Empirical equal-tail interval (percentiles 100(1-alpha)/2 and
// 100(1+alpha)/2) of the true unsampled fidelity conditional on
// errors_measured == target. `tolerance` > 0 accepts
// |e_M - target| <= tolerance instead (an approximation for
// low-acceptance regimes). Throws InsufficientDataError when fewer than
// 100 trials are accepted.
PercentileInterval conditional_percentile_interval(
    const NoiseModel& model, long long n_measured, long long target_errors,
    double alpha, long long n_trials, std::uint64_t seed, int tolerance = 0);

struct ErrorDistribution {
  std::vector<double> bin_edges;     // n_bins + 1 edges
  std::vector<long long> bin_counts;
  long long n_trials;
  double stderr_coverage;   // +-1 sigma interval
  double general_coverage;  // C^(T*) at the given alpha
};

// Distribution of the estimation error f~ - f over trials, plus the
// coverage of the standard-error and general intervals.
ErrorDistribution error_distribution(const NoiseModel& model,
                                     long long n_measured, long long n_trials,
                                     std::uint64_t seed, int n_bins = 60,
                                     double alpha = 0.95);

// Worker threads used for trial batches: min(hardware, FIDELITY_CI_THREADS).
int simulation_thread_count();

}  // namespace fidest

#endif  // FIDEST_SIMULATOR_HPP
