#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "fidest/posterior.hpp"

using namespace fidest;

TEST_CASE("SampleSummary validation") {
  CHECK_NOTHROW(SampleSummary(2, 1, 0));
  CHECK_THROWS_AS(SampleSummary(10, 0, 0), std::invalid_argument);   // M >= 1
  CHECK_THROWS_AS(SampleSummary(10, 10, 2), std::invalid_argument);  // M < N
  CHECK_THROWS_AS(SampleSummary(10, 5, 6), std::invalid_argument);   // e <= M
  CHECK_THROWS_AS(SampleSummary(10, 5, -1), std::invalid_argument);
  CHECK(SampleSummary(100, 40, 10).qber_measured() == 0.25);
  CHECK(SampleSummary(100, 40, 10).n_unsampled() == 60);
}

TEST_CASE("pmf matches the exact two-pair case") {
  // N=2, M=1, e_M=0: P(0) = B(1/2,5/2)/B(1/2,3/2) = 3/4, P(1) = 1/4
  const SampleSummary summary(2, 1, 0);
  CHECK(posterior_pmf(summary, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(posterior_pmf(summary, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(posterior_pmf(summary, 2), std::out_of_range);
  CHECK_THROWS_AS(posterior_pmf(summary, -1), std::out_of_range);
}

TEST_CASE("pmf normalizes to 1") {
  for (const auto& [n, m, e] :
       {std::tuple<long long, long long, long long>{50, 10, 3},
        {1000, 400, 41},
        {20000, 10000, 1000},
        {20000, 18000, 5999}}) {
    const UnsampledErrorPosterior posterior(SampleSummary(n, m, e));
    double sum = 0.0;
    for (long long k = 0; k <= n - m; ++k) {
      sum += posterior.pmf(k);
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-10);
  }
}

TEST_CASE("pmf complement symmetry") {
  // pmf of (N, M, e_M) at e equals pmf of (N, M, M-e_M) at (N-M)-e
  const SampleSummary summary(300, 120, 17);
  const SampleSummary flipped(300, 120, 120 - 17);
  const UnsampledErrorPosterior p(summary);
  const UnsampledErrorPosterior q(flipped);
  for (long long e = 0; e <= 180; e += 9) {
    CHECK(p.pmf(e) == doctest::Approx(q.pmf(180 - e)).epsilon(1e-11));
  }
}

TEST_CASE("posterior mean") {
  // symmetry fixed point
  CHECK(posterior_mean(SampleSummary(100, 40, 20)) == 0.5);
  // direct arithmetic
  CHECK(posterior_mean(SampleSummary(10000, 1000, 100)) ==
        doctest::Approx(0.1 + 0.4 / 1001.0).epsilon(1e-14));
  // pmf-weighted mean oracle
  const SampleSummary summary(2000, 700, 150);
  const UnsampledErrorPosterior posterior(summary);
  const long long u = summary.n_unsampled();
  double mean = 0.0;
  double norm = 0.0;
  for (long long e = 0; e <= u; ++e) {
    const double p = posterior.pmf(e);
    mean += p * (static_cast<double>(e) / static_cast<double>(u));
    norm += p;
  }
  CHECK(std::fabs(mean / norm - posterior_mean(summary)) <= 1e-10);
}

TEST_CASE("variance closed form") {
  const SampleSummary summary(10000, 1000, 100);
  const double eps = posterior_mean(summary);
  const double want = 10001.0 / (9000.0 * 1002.0) * eps * (1.0 - eps);
  CHECK(variance_closed_form(summary) ==
        doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(1.0016e-4).epsilon(1e-3));

  // symmetric in eps_E <-> 1 - eps_E
  CHECK(variance_closed_form(SampleSummary(1000, 500, 100)) ==
        doctest::Approx(variance_closed_form(SampleSummary(1000, 500, 400)))
            .epsilon(1e-13));

  // grows as M -> N-1 at fixed N and qber
  double prev = 0.0;
  for (long long m = 500; m <= 950; m += 50) {
    const double v = variance_closed_form(SampleSummary(1000, m, m / 10));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("direct moments: t=1 equals the closed-form variance") {
  for (const auto& [n, m, e] :
       {std::tuple<long long, long long, long long>{100, 30, 5},
        {5000, 2500, 250},
        {20000, 2000, 600}}) {
    const SampleSummary summary(n, m, e);
    const PosteriorMoments moments = central_moments_direct(summary, 6);
    const double want = variance_closed_form(summary);
    CHECK(std::fabs(moments.central(1) - want) <= 1e-10 * want);
    // even moments are nonnegative and nonincreasing (support within [-1,1])
    double prev = moments.central(1);
    for (int t = 2; t <= 3; ++t) {
      CHECK(moments.central(t) >= 0.0);
      CHECK(moments.central(t) <= prev * (1.0 + 1e-12));
      prev = moments.central(t);
    }
  }
}

TEST_CASE("analytic raw moments") {
  const SampleSummary summary(1000, 400, 60);
  const double u = static_cast<double>(summary.n_unsampled());
  const double eps = posterior_mean(summary);
  CHECK(raw_moment_analytic(summary, 0) == doctest::Approx(1.0));
  CHECK(raw_moment_analytic(summary, 1) ==
        doctest::Approx(u * eps).epsilon(1e-13));
  const double m1 = static_cast<double>(summary.n_measured) + 1.0;
  const double want2 =
      u * eps * (1.0 + (u - 1.0) * (m1 * eps + 1.0) /
                           (static_cast<double>(summary.n_measured) + 2.0));
  CHECK(raw_moment_analytic(summary, 2) ==
        doctest::Approx(want2).epsilon(1e-12));
}

TEST_CASE("analytic central moments agree with direct summation") {
  // first central moment vanishes
  CHECK(std::fabs(central_moment_analytic(SampleSummary(500, 100, 10), 1)) <=
        1e-12);
  // t=2 equals the closed form
  const SampleSummary summary(800, 300, 40);
  CHECK(central_moment_analytic(summary, 2) ==
        doctest::Approx(variance_closed_form(summary)).epsilon(1e-11));
  // spot case from the contract
  const SampleSummary small(100, 50, 5);
  const PosteriorMoments direct = central_moments_direct(small, 8);
  CHECK(central_moment_analytic(small, 4) ==
        doctest::Approx(direct.central(2)).epsilon(1e-9));

  // randomized envelope
  std::mt19937_64 gen(31337);
  for (int i = 0; i < 40; ++i) {
    const long long n = 50 + static_cast<long long>(gen() % 950);
    const long long m = 1 + static_cast<long long>(gen() % (n - 1));
    const long long e = static_cast<long long>(gen() % (m + 1));
    const SampleSummary s(n, m, e);
    const PosteriorMoments mom = central_moments_direct(s, 10);
    for (int t = 1; t <= 5; ++t) {
      const double got = central_moment_analytic(s, 2 * t);
      const double want = mom.central(t);
      CHECK(std::fabs(got - want) <= 1e-8 * std::fabs(want));
    }
  }
}

TEST_CASE("analytic path rejects out-of-envelope parameters") {
  CHECK_THROWS_AS(raw_moment_analytic(SampleSummary(100, 50, 5), 11),
                  std::invalid_argument);
  CHECK_THROWS_AS(raw_moment_analytic(SampleSummary(20001, 1000, 5), 2),
                  std::invalid_argument);
}

TEST_CASE("posterior disperses as N shrinks at fixed M, e_M") {
  // smaller remainder N-M => larger variance (and visibly wider pmf)
  double prev = 0.0;
  for (const long long n : {20000LL, 5000LL, 2000LL, 1200LL}) {
    const SampleSummary summary(n, 1000, 30);
    const double v = variance_closed_form(summary);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("moment order validation") {
  const SampleSummary summary(100, 50, 5);
  CHECK_THROWS_AS(central_moments_direct(summary, 3), std::invalid_argument);
  CHECK_THROWS_AS(central_moments_direct(summary, 0), std::invalid_argument);
  CHECK_THROWS_AS(central_moments_direct(summary, 66), std::invalid_argument);
}
