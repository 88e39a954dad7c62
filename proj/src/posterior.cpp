#include "fidest/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fidest/exact_combinatorics.hpp"

namespace fidest {

SampleSummary::SampleSummary(long long n_total_, long long n_measured_,
                             long long errors_measured_)
    : n_total(n_total_),
      n_measured(n_measured_),
      errors_measured(errors_measured_) {
  if (n_measured < 1) {
    throw std::invalid_argument("n_measured must be >= 1");
  }
  if (n_measured >= n_total) {
    throw std::invalid_argument(
        "n_measured must be < n_total (no unsampled pairs otherwise)");
  }
  if (errors_measured < 0 || errors_measured > n_measured) {
    throw std::invalid_argument(
        "errors_measured must be in [0, n_measured]");
  }
}

UnsampledErrorPosterior::UnsampledErrorPosterior(const SampleSummary& summary)
    : summary_(summary),
      shape_a_(static_cast<double>(summary.errors_measured) + 0.5),
      shape_b_(static_cast<double>(summary.n_measured -
                                   summary.errors_measured) +
               0.5),
      log_norm_(ln_beta(shape_a_, shape_b_)) {
  const double eps_m = summary.qber_measured();
  mean_ = eps_m + (0.5 - eps_m) / (static_cast<double>(summary.n_measured) + 1.0);
}

LogProb UnsampledErrorPosterior::log_pmf(long long e) const {
  const long long u = summary_.n_unsampled();
  if (e < 0 || e > u) {
    throw std::out_of_range("posterior_pmf: e must be in [0, N - M]");
  }
  const double de = static_cast<double>(e);
  const double du = static_cast<double>(u);
  return LogProb{ln_binomial(u, e) +
                 ln_beta(de + shape_a_, (du - de) + shape_b_) - log_norm_};
}

PosteriorMoments UnsampledErrorPosterior::central_moments(int max_order) const {
  if (max_order < 2 || max_order % 2 != 0 || max_order > 64) {
    throw std::invalid_argument(
        "central_moments: max_order must be even and in [2, 64]");
  }
  const long long u = summary_.n_unsampled();
  const double du = static_cast<double>(u);
  const int n_orders = max_order / 2;

  // Kahan-compensated accumulators: the sums are all-positive, the
  // compensation just keeps the 1e-10 normalization checks honest at
  // N ~ 2e5.
  std::vector<double> acc(static_cast<size_t>(n_orders) + 1, 0.0);
  std::vector<double> comp(static_cast<size_t>(n_orders) + 1, 0.0);
  auto add = [&](int slot, double v) {
    const double y = v - comp[slot];
    const double t = acc[slot] + y;
    comp[slot] = (t - acc[slot]) - y;
    acc[slot] = t;
  };

  for (long long e = 0; e <= u; ++e) {
    const double p = pmf(e);
    add(0, p);
    const double dev = static_cast<double>(e) / du - mean_;
    const double dev2 = dev * dev;
    double power = dev2;
    for (int t = 1; t <= n_orders; ++t) {
      add(t, p * power);
      power *= dev2;
    }
  }

  PosteriorMoments out;
  out.mean_unsampled_qber = mean_;
  out.max_order = max_order;
  out.central_moments.resize(static_cast<size_t>(n_orders));
  for (int t = 1; t <= n_orders; ++t) {
    out.central_moments[static_cast<size_t>(t) - 1] = acc[t] / acc[0];
  }
  return out;
}

double posterior_pmf(const SampleSummary& summary, long long e) {
  return UnsampledErrorPosterior(summary).pmf(e);
}

double posterior_mean(const SampleSummary& summary) {
  const double eps_m = summary.qber_measured();
  return eps_m +
         (0.5 - eps_m) / (static_cast<double>(summary.n_measured) + 1.0);
}

PosteriorMoments central_moments_direct(const SampleSummary& summary,
                                        int max_order) {
  return UnsampledErrorPosterior(summary).central_moments(max_order);
}

double variance_closed_form(const SampleSummary& summary) {
  const double n = static_cast<double>(summary.n_total);
  const double m = static_cast<double>(summary.n_measured);
  const double eps = posterior_mean(summary);
  return (n + 1.0) / ((n - m) * (m + 2.0)) * eps * (1.0 - eps);
}

namespace {

void check_analytic_envelope(const SampleSummary& summary, int j) {
  if (j < 0 || j > 10) {
    throw std::invalid_argument(
        "analytic moments: order must be in [0, 10] (validation-scale path)");
  }
  if (summary.n_unsampled() > 10000) {
    throw std::invalid_argument(
        "analytic moments: N - M must be <= 1e4 (validation-scale path)");
  }
}

}  // namespace

namespace {

using Rational = boost::multiprecision::cpp_rational;

// The posterior shapes are exact half-integers (a = e_M + 1/2,
// b = M - e_M + 1/2), so every quantity in the analytic moment formulas
// is rational. Evaluating them exactly sidesteps the catastrophic
// cancellation of the alternating raw-to-central conversion, which costs
// ~12 digits at the 10th moment in floating point.
Rational raw_moment_rational(const SampleSummary& summary, int j) {
  const long long two_a = 2 * summary.errors_measured + 1;
  const long long m = summary.n_measured;
  Rational total = 0;
  for (int l = 0; l <= j; ++l) {
    // B(l+a, b)/B(a, b) telescopes: prod_i (a+i)/(a+b+i)
    Rational beta_ratio = 1;
    for (int i = 0; i < l; ++i) {
      beta_ratio *= Rational(two_a + 2 * i, 2 * (m + 1 + i));
    }
    total += Rational(stirling2(j, l) *
                      falling_factorial(summary.n_unsampled(), l)) *
             beta_ratio;
  }
  return total;
}

}  // namespace

double raw_moment_analytic(const SampleSummary& summary, int j) {
  check_analytic_envelope(summary, j);
  return raw_moment_rational(summary, j).convert_to<double>();
}

double central_moment_analytic(const SampleSummary& summary, int t) {
  check_analytic_envelope(summary, t);
  const Rational u = summary.n_unsampled();
  const Rational eps(2 * summary.errors_measured + 1,
                     2 * (summary.n_measured + 1));

  // M_c^(t)[E_U] = sum_j (-1)^j C(t,j) eps_E^j M^(t-j)[S_U] / (N-M)^(t-j)
  Rational total = 0;
  Rational binom = 1;  // C(t, j)
  Rational eps_pow = 1;
  for (int j = 0; j <= t; ++j) {
    Rational u_pow = 1;
    for (int k = 0; k < t - j; ++k) {
      u_pow *= u;
    }
    const Rational term =
        binom * eps_pow * raw_moment_rational(summary, t - j) / u_pow;
    total += (j % 2 == 0) ? term : -term;
    binom *= Rational(t - j, j + 1);
    eps_pow *= eps;
  }
  return total.convert_to<double>();
}

}  // namespace fidest
