// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "trontrain/distributions.hpp"
#include "trontrain/error.hpp"

using namespace tt;

namespace {

const RealVector kWStar{-1.0, 1.0};

InputDistribution square() { return InputDistribution::uniform_cube(2, -1.0, 1.0); }

bool within(double measured, double expected, double se, double k = 3.0) {
  return std::abs(measured - expected) <= k * se + 1e-15;
}

}  // namespace

TEST_CASE("sample: box mean, support and determinism") {
  const auto xs = sample(square(), 5, 100000);
  RealVector mean(2);
  for (const auto& x : xs) mean += x;
  mean *= 1.0 / static_cast<double>(xs.size());
  // sd of Unif[-1,1] is 1/sqrt(3); 3 sd/sqrt(N) is about 0.0055.
  CHECK(std::abs(mean[0]) < 0.02);
  CHECK(std::abs(mean[1]) < 0.02);

  const auto g1 = sample(InputDistribution::isotropic_gaussian(1, 1.0), 42, 3);
  const auto g2 = sample(InputDistribution::isotropic_gaussian(1, 1.0), 42, 3);
  CHECK(g1 == g2);

  for (const auto& x : sample(InputDistribution::uniform_box({0.0}, {1.0}), 9, 10000)) {
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 1.0);
  }
}

TEST_CASE("unit ball and sphere radii") {
  for (const auto& x : sample(InputDistribution::unit_ball(3), 1, 2000)) CHECK(norm(x) <= 1.0 + 1e-12);
  for (const auto& x : sample(InputDistribution::unit_sphere(3), 1, 2000)) CHECK(norm(x) == doctest::Approx(1.0));
  CHECK(InputDistribution::unit_ball(4).support_radius() == 1.0);
  CHECK(square().support_radius() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::isinf(InputDistribution::isotropic_gaussian(2, 1.0).support_radius()));
}

TEST_CASE("distribution guards") {
  CHECK_THROWS_AS(InputDistribution::uniform_box({1.0}, {0.0}), Error);
  CHECK_THROWS_AS(InputDistribution::isotropic_gaussian(2, 0.0), Error);
  CHECK_THROWS_AS(estimate_moments(square(), RealVector{1.0}, 0.0, AttackProbability::constant(1.0), 10000, 1),
                  Error);
  CHECK_THROWS_AS(estimate_moments(square(), kWStar, 0.0, AttackProbability::constant(1.0), 10, 1), Error);
}

TEST_CASE("attack probability built-ins") {
  const auto c = AttackProbability::constant(0.3);
  CHECK(c(RealVector{5.0, -5.0}) == 0.3);
  CHECK(c.sup() == 0.3);
  const auto h = AttackProbability::indicator_halfspace({1.0, 0.0}, 0.7);
  CHECK(h(RealVector{0.5, 0.0}) == 0.7);
  CHECK(h(RealVector{-0.5, 0.0}) == 0.0);
  CHECK(h(RealVector{0.0, 1.0}) == 0.0);  // boundary is the false branch
  const auto clamped = AttackProbability::custom([](const RealVector&) { return 2.0; }, "two");
  CHECK(clamped(RealVector{0.0}) == 1.0);
  CHECK(AttackProbability::constant(1.5)(RealVector{0.0}) == 1.0);
}

TEST_CASE("example1_analytic values") {
  const auto v0 = example1_analytic(0.0);
  CHECK(v0.d1 == doctest::Approx(1.0 / 6));
  CHECK(v0.d2 == 0.0);
  CHECK(v0.lambda1 == doctest::Approx(1.0 / 6));
  // The threshold 2 theta* reaches the corner value 1 at theta* = 0.5, where
  // the closed forms give 1/16 - 5/96 = 1/96; at theta* = 1 the event is empty.
  const auto vh = example1_analytic(0.5);
  CHECK(vh.d1 == doctest::Approx(1.0 / 16));
  CHECK(vh.d2 == doctest::Approx(-5.0 / 96));
  CHECK(vh.lambda1 == doctest::Approx(1.0 / 96));
  CHECK(example1_analytic(1.0).lambda1 == doctest::Approx(0.0));
}

TEST_CASE("example1 d1 against an independent Monte-Carlo oracle") {
  // E[1{-x1 + x2 > 0} x1^2] on the square, computed without the library.
  Rng rng = make_rng(99);
  const std::size_t N = 400000;
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x1 = uniform(rng, -1.0, 1.0);
    const double x2 = uniform(rng, -1.0, 1.0);
    const double v = (-x1 + x2 > 0.0) ? x1 * x1 : 0.0;
    s += v;
    ss += v * v;
  }
  const double mean = s / N;
  const double se = std::sqrt((ss / N - mean * mean) / N);
  CHECK(within(mean, example1_analytic(0.0).d1, se));
}

TEST_CASE("estimate_moments agrees with example1_analytic across theta*") {
  for (double theta : {0.0, 0.25, 0.5, 1.0}) {
    const auto m = estimate_moments(square(), kWStar, theta, AttackProbability::constant(1.0), 200000, 3);
    CAPTURE(theta);
    CHECK(within(m.lambda1_theta, example1_analytic(theta).lambda1, m.std_err.lambda1_theta, 4.0));
  }
}

TEST_CASE("Gaussian 1-D constants") {
  const auto m = estimate_moments(InputDistribution::isotropic_gaussian(1, 1.0), RealVector{1.0}, 0.0,
                                  AttackProbability::constant(1.0), kUnitTestMcSamples * 10, 4);
  // Half-line integral of x^2 phi is 1/2.
  CHECK(within(m.a2, 0.5, m.std_err.a2));
  CHECK(within(m.lambda1_theta, 0.5, m.std_err.lambda1_theta));
  CHECK(m.provenance == Provenance::kMonteCarlo);
}

TEST_CASE("moment invariants") {
  const auto m = estimate_moments(square(), kWStar, 0.0, AttackProbability::constant(1.0), kUnitTestMcSamples, 5);
  CHECK(m.a2 * m.a2 <= m.a4);
  for (double v : {m.a1, m.a2, m.a3, m.a4, m.beta1, m.beta2, m.beta3}) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
  // beta == 1 reuses the same samples, so the beta moments are exact copies.
  CHECK(m.beta1 == m.a1);
  CHECK(m.beta2 == m.a2);
  CHECK(m.beta3 == m.a3);

  const auto half = estimate_moments(square(), kWStar, 0.0, AttackProbability::constant(0.5), kUnitTestMcSamples, 5);
  CHECK(half.beta1 == doctest::Approx(0.5 * m.a1));
}

TEST_CASE("theta*=0 constants are invariant to positive rescaling of w*") {
  const auto beta = AttackProbability::constant(0.4);
  const auto a = estimate_moments(square(), kWStar, 0.0, beta, kUnitTestMcSamples, 6);
  const auto b = estimate_moments(square(), 3.5 * kWStar, 0.0, beta, kUnitTestMcSamples, 6);
  CHECK(a.a1 == b.a1);
  CHECK(a.a4 == b.a4);
  CHECK(a.beta2 == b.beta2);
  CHECK(a.lambda1_theta == b.lambda1_theta);
}

TEST_CASE("lambda1 is non-increasing in theta*") {
  double prev = INFINITY;
  double prev_se = 0.0;
  for (double theta : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto m = estimate_moments(square(), kWStar, theta, AttackProbability::constant(1.0), 100000, 8);
    CHECK(m.lambda1_theta <= prev + 3.0 * (m.std_err.lambda1_theta + prev_se));
    prev = m.lambda1_theta;
    prev_se = m.std_err.lambda1_theta;
  }
}

TEST_CASE("estimate_moments is deterministic in the seed") {
  const auto beta = AttackProbability::constant(0.2);
  const auto a = estimate_moments(square(), kWStar, 0.1, beta, kUnitTestMcSamples, 77);
  const auto b = estimate_moments(square(), kWStar, 0.1, beta, kUnitTestMcSamples, 77);
  CHECK(a.lambda1_theta == b.lambda1_theta);
  CHECK(a.a3 == b.a3);
}
