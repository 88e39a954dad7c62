#include "fidest/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fidest/numerics.hpp"

namespace fidest {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("alpha must be in (0, 1)");
  }
}

void check_even_order(int max_order) {
  if (max_order < 2 || max_order % 2 != 0) {
    throw std::invalid_argument("moment order must be even and >= 2");
  }
}

double radius_from_moments(const PosteriorMoments& moments, double alpha,
                           int max_order) {
  double best = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= max_order / 2; ++t) {
    const double r =
        1.5 * std::pow(moments.central(t) / (1.0 - alpha),
                       1.0 / (2.0 * static_cast<double>(t)));
    best = std::fmin(best, r);
  }
  return best;
}

CredibleInterval symmetric_interval(double center, double radius, double alpha,
                                    IntervalKind kind, int order) {
  return CredibleInterval{center,          radius, alpha, kind, order,
                          center - radius, center + radius};
}

}  // namespace

const char* to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::general:
      return "general";
    case IntervalKind::iid_exact:
      return "iid-exact";
    case IntervalKind::iid_asymptotic:
      return "iid-asymptotic";
    case IntervalKind::standard_error:
      return "standard-error";
  }
  return "unknown";
}

int optimal_moment_order(double alpha) {
  check_alpha(alpha);
  const double v = (-2.0 * std::log1p(-alpha) + 0.8) / 2.0;
  const long long rounded = std::llround(v);
  return static_cast<int>(std::max<long long>(1, rounded)) * 2;
}

double center_estimate(const SampleSummary& summary) {
  return 1.0 - 1.5 * posterior_mean(summary);
}

double radius_general(const SampleSummary& summary, double alpha,
                      int max_order) {
  check_alpha(alpha);
  check_even_order(max_order);
  const PosteriorMoments moments = central_moments_direct(summary, max_order);
  return radius_from_moments(moments, alpha, max_order);
}

CredibleInterval credible_interval_general(const SampleSummary& summary,
                                           double alpha) {
  return credible_interval_general(summary, alpha,
                                   optimal_moment_order(alpha));
}

CredibleInterval credible_interval_general(const SampleSummary& summary,
                                           double alpha, int max_order) {
  const double center = center_estimate(summary);
  const double radius = radius_general(summary, alpha, max_order);
  return symmetric_interval(center, radius, alpha, IntervalKind::general,
                            max_order);
}

double radius_2_closed_form(const SampleSummary& summary, double alpha) {
  check_alpha(alpha);
  return 1.5 * std::sqrt(variance_closed_form(summary) / (1.0 - alpha));
}

int exact_optimal_order(const SampleSummary& summary, double alpha,
                        int search_limit) {
  check_alpha(alpha);
  check_even_order(search_limit);
  if (search_limit > 64) {
    throw std::invalid_argument("exact_optimal_order: search_limit <= 64");
  }
  const PosteriorMoments moments =
      central_moments_direct(summary, search_limit);
  double best = std::numeric_limits<double>::infinity();
  int best_t = 1;
  for (int t = 1; t <= search_limit / 2; ++t) {
    const double r =
        1.5 * std::pow(moments.central(t) / (1.0 - alpha),
                       1.0 / (2.0 * static_cast<double>(t)));
    if (r < best) {
      best = r;
      best_t = t;
    }
  }
  return 2 * best_t;
}

CredibleInterval iid_interval_exact(const SampleSummary& summary,
                                    double alpha) {
  check_alpha(alpha);
  const double a = static_cast<double>(summary.errors_measured) + 0.5;
  const double b =
      static_cast<double>(summary.n_measured - summary.errors_measured) + 0.5;
  const double tail = 0.5 * (1.0 - alpha);
  const double lower = 1.0 - 1.5 * inv_reg_inc_beta(1.0 - tail, a, b);
  const double upper = 1.0 - 1.5 * inv_reg_inc_beta(tail, a, b);
  CredibleInterval out;
  out.center = 0.5 * (lower + upper);
  out.radius = 0.5 * (upper - lower);
  out.credible_level = alpha;
  out.kind = IntervalKind::iid_exact;
  out.moment_order = 0;
  out.lower_raw = lower;
  out.upper_raw = upper;
  return out;
}

CredibleInterval iid_interval_asymptotic(const SampleSummary& summary,
                                         double alpha,
                                         std::vector<std::string>* warnings) {
  check_alpha(alpha);
  if (summary.n_measured < 100 && warnings != nullptr) {
    warnings->push_back(
        "iid_interval_asymptotic: n_measured < 100, normal approximation "
        "may be poor");
  }
  const double f = center_estimate(summary);
  const double m = static_cast<double>(summary.n_measured);
  const double radius = std_normal_quantile(0.5 * (1.0 + alpha)) *
                        std::sqrt((2.0 * f + 1.0) * (1.0 - f) /
                                  (2.0 * (m + 2.0)));
  return symmetric_interval(f, radius, alpha, IntervalKind::iid_asymptotic, 0);
}

CredibleInterval standard_error_interval(const SampleSummary& summary) {
  const double f = center_estimate(summary);
  const double m = static_cast<double>(summary.n_measured);
  const double radius =
      std::sqrt((2.0 * f + 1.0) * (1.0 - f) / (2.0 * (m + 2.0)));
  // one-sigma normal mass
  constexpr double kOneSigmaLevel = 0.68268949213708585;
  return symmetric_interval(f, radius, kOneSigmaLevel,
                            IntervalKind::standard_error, 0);
}

RadiusDecomposition radius_decomposition(const SampleSummary& summary,
                                         double alpha) {
  check_alpha(alpha);
  const double f = center_estimate(summary);
  const double n = static_cast<double>(summary.n_total);
  const double m = static_cast<double>(summary.n_measured);
  RadiusDecomposition out;
  out.measurement_term =
      std::sqrt((2.0 * f + 1.0) * (1.0 - f) / (2.0 * (m + 2.0)));
  out.tail_term_general = std::sqrt(1.0 / (1.0 - alpha));
  out.tail_term_iid = std_normal_quantile(0.5 * (1.0 + alpha));
  out.atypicality_term = std::sqrt((n + 1.0) / (n - m));
  out.cramer_rao_reference =
      std::sqrt((2.0 * f + 1.0) * (1.0 - f) / (2.0 * m));
  return out;
}

long long excessive_measurement_threshold(long long n_total) {
  if (n_total < 2) {
    throw std::invalid_argument(
        "excessive_measurement_threshold: n_total must be >= 2");
  }
  return n_total / 2;
}

}  // namespace fidest
