#ifndef FIDEST_INTERVAL_HPP
#define FIDEST_INTERVAL_HPP

#include <string>
#include <vector>

#include "fidest/posterior.hpp"

// Interval estimators for the average fidelity of the unsampled pairs.
//
// The general-noise interval is centered at f~ = 1 - (3/2) eps_E and its
// radius minimizes the higher-moment Chebyshev bound
//
//   delta^(T) = min_{t <= T/2} (3/2) (M_c^(2t) / (1 - alpha))^(1/(2t))
//
// over the even moments of the unsampled-QBER posterior. The i.i.d.
// estimators (exact beta quantiles, asymptotic normal) serve as width
// lower bounds; they are not reliable under correlated noise.
//
// All radii are in fidelity units: the 3/2 QBER-to-fidelity slope is
// applied inside these operations, never by callers.

namespace fidest {

enum class IntervalKind {
  general,         // C^(T): even-moment Chebyshev bound
  iid_exact,       // equal-tail beta quantiles (asymmetric)
  iid_asymptotic,  // normal approximation
  standard_error,  // center +- one i.i.d. posterior standard deviation
};

const char* to_string(IntervalKind kind);

struct CredibleInterval {
  double center;
  double radius;
  double credible_level;
  IntervalKind kind;
  int moment_order;  // even T for kind == general, otherwise 0
  double lower_raw;  // center - radius (can fall below 0 at tiny M)
  double upper_raw;  // center + radius

  // presentation endpoints, clamped to the physical fidelity range
  double lower() const { return std::fmax(0.0, std::fmin(1.0, lower_raw)); }
  double upper() const { return std::fmax(0.0, std::fmin(1.0, upper_raw)); }

  bool contains(double fidelity) const {
    return lower_raw <= fidelity && fidelity <= upper_raw;
  }
};

// The three accuracy factors of delta^(2) plus the Cramer-Rao reference.
struct RadiusDecomposition {
  double measurement_term;      // sqrt((2f~+1)(1-f~) / (2(M+2)))
  double tail_term_general;     // sqrt(1/(1-alpha))
  double tail_term_iid;         // Q((1+alpha)/2)
  double atypicality_term;      // sqrt((N+1)/(N-M)), always > 1
  double cramer_rao_reference;  // sqrt((2f~+1)(1-f~) / (2M))
};

// T* = 2 round((-2 ln(1-alpha) + 0.8) / 2), clamped to >= 2.
int optimal_moment_order(double alpha);

// f~ = 1 - (3/2)(eps_M + (1/2 - eps_M)/(M+1))
double center_estimate(const SampleSummary& summary);

// delta^(T); nonincreasing in max_order.
double radius_general(const SampleSummary& summary, double alpha,
                      int max_order);

// C^(T) with T = optimal_moment_order(alpha), or an explicit override.
CredibleInterval credible_interval_general(const SampleSummary& summary,
                                           double alpha);
CredibleInterval credible_interval_general(const SampleSummary& summary,
                                           double alpha, int max_order);

// Closed form of delta^(2).
double radius_2_closed_form(const SampleSummary& summary, double alpha);

// Smallest even T achieving the minimum of delta^(T) over T <= search_limit.
// Validates that the closed-form T* rule is a tight upper bound.
int exact_optimal_order(const SampleSummary& summary, double alpha,
                        int search_limit);

// Equal-tail beta-quantile interval assuming i.i.d. noise (asymmetric;
// center/radius are derived from the endpoints).
CredibleInterval iid_interval_exact(const SampleSummary& summary,
                                    double alpha);

// Normal-approximation interval assuming i.i.d. noise. Meant for M >> 1;
// below M = 100 a warning is appended to `warnings` (when provided).
CredibleInterval iid_interval_asymptotic(const SampleSummary& summary,
                                         double alpha,
                                         std::vector<std::string>* warnings
                                         = nullptr);

// f~ +- one posterior standard deviation under the i.i.d. model (the
// measurement term). The naive baseline whose coverage collapses under
// heterogeneous noise.
CredibleInterval standard_error_interval(const SampleSummary& summary);

RadiusDecomposition radius_decomposition(const SampleSummary& summary,
                                         double alpha);

// floor(N/2): measuring at or beyond this makes delta^(2) nondecreasing
// in M (more measurements, wider interval).
long long excessive_measurement_threshold(long long n_total);

}  // namespace fidest

#endif  // FIDEST_INTERVAL_HPP
