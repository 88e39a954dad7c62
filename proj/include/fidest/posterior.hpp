#ifndef FIDEST_POSTERIOR_HPP
#define FIDEST_POSTERIOR_HPP

#include <vector>

#include "fidest/numerics.hpp"

// Beta-binomial posterior of the unsampled error count.
//
// A measurement round samples n_measured of n_total qubit pairs and sees
// errors_measured mismatches. With the Jeffreys prior on the unknown error
// rate, the number of errors e among the N - M unsampled pairs has
// posterior
//
//   P(e) = C(N-M, e) * B(e + e_M + 1/2, N - e - e_M + 1/2)
//                    / B(e_M + 1/2, M - e_M + 1/2),
//
// a beta-binomial. The credible-interval machinery consumes its mean and
// even central moments.

namespace fidest {

// Sufficient statistic of a measurement round.
struct SampleSummary {
  long long n_total;          // N
  long long n_measured;       // M
  long long errors_measured;  // e_M

  SampleSummary(long long n_total, long long n_measured,
                long long errors_measured);

  long long n_unsampled() const { return n_total - n_measured; }
  double qber_measured() const {
    return static_cast<double>(errors_measured) /
           static_cast<double>(n_measured);
  }
};

// Mean and even central moments of the unsampled-QBER posterior;
// central_moments[t-1] is the 2t-th central moment.
struct PosteriorMoments {
  double mean_unsampled_qber;
  std::vector<double> central_moments;
  int max_order;

  // 2t-th central moment, 1 <= t <= max_order/2
  double central(int t) const { return central_moments.at(t - 1); }
};

// Posterior pmf of the unsampled error count with the per-summary log
// normalizer cached. Pure value object, safe to share across threads.
class UnsampledErrorPosterior {
 public:
  explicit UnsampledErrorPosterior(const SampleSummary& summary);

  LogProb log_pmf(long long e) const;
  double pmf(long long e) const { return log_pmf(e).linear(); }

  // E[E_U | eps_M] = eps_M + (1/2 - eps_M)/(M + 1)
  double mean() const { return mean_; }

  // Even central moments up to max_order by direct summation over the
  // support (nonnegative terms, no cancellation). One pass computes all
  // orders; cost O(max_order/2 * (N - M)).
  PosteriorMoments central_moments(int max_order) const;

  const SampleSummary& summary() const { return summary_; }

 private:
  SampleSummary summary_;
  double shape_a_;     // e_M + 1/2
  double shape_b_;     // M - e_M + 1/2
  double log_norm_;    // ln B(shape_a, shape_b)
  double mean_;
};

double posterior_pmf(const SampleSummary& summary, long long e);
double posterior_mean(const SampleSummary& summary);
PosteriorMoments central_moments_direct(const SampleSummary& summary,
                                        int max_order);

// Closed-form variance V[E_U | eps_M] = (N+1)/((N-M)(M+2)) eps_E(1-eps_E).
double variance_closed_form(const SampleSummary& summary);

// Analytic raw moment of the unsampled error count via Stirling numbers
// and descending factorials. Validation-scale only (the alternating
// central-moment combination cancels catastrophically at large N):
// requires j <= 10 and N - M <= 1e4.
double raw_moment_analytic(const SampleSummary& summary, int j);

// t-th central moment from the raw moments (same validation envelope).
double central_moment_analytic(const SampleSummary& summary, int t);

}  // namespace fidest

#endif  // FIDEST_POSTERIOR_HPP
