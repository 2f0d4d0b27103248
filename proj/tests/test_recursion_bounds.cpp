// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "trontrain/error.hpp"
#include "trontrain/experiment.hpp"
#include "trontrain/recursion_bounds.hpp"

using namespace tt;

namespace {

ErrorCode code_of(RecursionBound (*f)(const RecursionParams&), const RecursionParams& p) {
  try {
    (void)f(p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("case 1 worked example") {
  RecursionParams p;
  p.b1 = 2.0;
  p.c1 = 4.0;
  p.delta0 = 1.0;
  p.C = 1.0;
  p.eps_prime_sq = 0.01;
  const auto b = recurse_case1(p);
  CHECK(b.eta_prime == doctest::Approx(0.25));
  CHECK(b.alpha == doctest::Approx(0.75));
  CHECK(b.predicted_T == 1 + static_cast<std::int64_t>(std::ceil(std::log(100.0) / std::log(4.0 / 3.0))));
  CHECK(b.predicted_T == 18);
  CHECK(b.floor == 0.0);
  CHECK(unroll_worst_case(p, b).certified);

  p.eps_prime_sq = p.C;
  CHECK(recurse_case1(p).predicted_T == 1);

  p.eps_prime_sq = 0.01;
  p.c1 = 0.5;  // needs c1 > 4 * 1 / 4 = 1
  CHECK(code_of(recurse_case1, p) == ErrorCode::kHypothesis);
}

TEST_CASE("hand unroll certifies at T = 3") {
  RecursionParams p;
  p.b1 = 2.0;
  p.c1 = 2.0;  // alpha = 1 - b1^2 d0 / ((1+d0)^2 c1) = 0.5
  p.delta0 = 1.0;
  p.C = 1.0;
  p.eps_prime_sq = 0.3;
  const auto b = recurse_case1(p);
  CHECK(b.alpha == doctest::Approx(0.5));
  CHECK(b.predicted_T == 3);
  const auto u = unroll_worst_case(p, b);
  REQUIRE(u.sequence.size() == 3);
  CHECK(u.sequence[0] == 1.0);
  CHECK(u.sequence[1] == doctest::Approx(0.5));
  CHECK(u.sequence[2] == doctest::Approx(0.25));
  CHECK(u.certified);
}

TEST_CASE("case 2 examples") {
  RecursionParams p;
  p.b1 = 1.0;
  p.c1 = 1.0;
  p.c2 = 1.0;
  p.C = 1.0;
  p.eps_prime_sq = 1.0;
  // Target equal to the start: nothing to do.
  CHECK(recurse_case2(p).predicted_T == 1);

  // c2 == c1 puts the asymptote exactly at eps'^2, so a target below C is unreachable.
  p.eps_prime_sq = 0.25;
  CHECK(code_of(recurse_case2, p) == ErrorCode::kTargetBelowFloor);

  p.c2 = 0.5;
  const auto b = recurse_case2(p);
  CHECK(b.alpha == doctest::Approx(1.0 - 0.25 / (1.25 * 1.25)));
  CHECK(b.floor == doctest::Approx(0.5 * 0.25));
  CHECK(unroll_worst_case(p, b).certified);

  p.b1 = 10.0;  // b^2/c1 = 100 > (sqrt(0.5) + 1/sqrt(0.5))^2 = 4.5
  CHECK(code_of(recurse_case2, p) == ErrorCode::kHypothesis);
}

TEST_CASE("additive-noise recursion examples") {
  RecursionParams p;
  p.b1 = 1.0;
  p.c1 = 2.0;
  p.c2 = 0.1;
  p.c3 = 0.05;
  p.C = 1.0;
  p.eps_prime_sq = 0.2;
  const double lb = lemma6_gamma_lower_bound(p.b1, p.c1, p.c2, p.c3, p.eps_prime_sq);
  // max{1/2, (0.2 + 0.05) / (0.2 - 0.05)} = 5/3.
  CHECK(lb == doctest::Approx(5.0 / 3.0));
  p.gamma = 2.0 * std::max(1.0, lb);
  const auto b = recurse2(p);
  CHECK(b.eta_prime == doctest::Approx(p.b1 / (p.gamma * p.c1)));
  CHECK(b.floor == doctest::Approx(lemma6_floor(p.b1, p.c1, p.c2, p.c3, p.gamma)));
  CHECK(b.floor == doctest::Approx(b.beta / (1.0 - b.alpha)).epsilon(1e-12));
  CHECK(unroll_worst_case(p, b).certified);

  p.gamma = lb;  // strict inequality required
  CHECK(code_of(recurse2, p) == ErrorCode::kHypothesis);

  p.gamma = 2.0 * lb;
  p.eps_prime_sq = 0.04;  // below c3/b1
  CHECK(code_of(recurse2, p) == ErrorCode::kHypothesis);
}

TEST_CASE("additive-noise recursion near the noiseless boundary") {
  RecursionParams p;
  p.b1 = 1.0;
  p.c1 = 2.0;
  p.c2 = 1e-12;
  p.c3 = 1e-12;
  p.C = 1.0;
  p.eps_prime_sq = 1e-3;
  p.gamma = 2.0 * std::max(1.0, lemma6_gamma_lower_bound(p.b1, p.c1, p.c2, p.c3, p.eps_prime_sq));
  const auto b = recurse2(p);
  CHECK(b.floor < 1e-11);
  CHECK(unroll_worst_case(p, b).certified);

  p.c2 = p.c3 = 0.0;
  CHECK(code_of(recurse2, p) == ErrorCode::kHypothesis);
  CHECK(recurse2_allow_noiseless(p).floor == 0.0);
}

TEST_CASE("unroll matches the geometric closed form") {
  RecursionParams p;
  p.b1 = 1.0;
  p.c1 = 2.0;
  p.c2 = 0.1;
  p.c3 = 0.05;
  p.C = 1.0;
  p.eps_prime_sq = 0.2;
  p.gamma = 4.0;
  const auto b = recurse2(p);
  const auto u = unroll_worst_case(p, b);
  for (std::size_t t = 0; t < u.sequence.size(); ++t) {
    const double at = std::pow(b.alpha, static_cast<double>(t));
    const double closed = at * p.C + b.floor * (1.0 - at);
    CHECK(std::abs(u.sequence[t] - closed) <= 1e-10);
    CHECK(u.sequence[t] >= b.floor);
  }
}

TEST_CASE("predicted_T monotone in eps'^2 and C") {
  RecursionParams p;
  p.b1 = 2.0;
  p.c1 = 4.0;
  p.delta0 = 1.0;
  p.C = 1.0;
  std::int64_t prev = INT64_MAX;
  for (double e : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
    p.eps_prime_sq = e;
    const auto T = recurse_case1(p).predicted_T;
    CHECK(T <= prev);
    prev = T;
  }
  p.eps_prime_sq = 1e-3;
  prev = 0;
  for (double C : {0.01, 0.1, 1.0, 10.0}) {
    p.C = C;
    const auto T = recurse_case1(p).predicted_T;
    CHECK(T >= prev);
    prev = T;
  }

  RecursionParams q;
  q.b1 = 1.0;
  q.c1 = 2.0;
  q.c2 = 0.1;
  q.c3 = 0.05;
  q.C = 1.0;
  q.gamma = 10.0;
  prev = INT64_MAX;
  for (double e : {0.12, 0.2, 0.4, 0.8}) {
    q.eps_prime_sq = e;
    const auto T = recurse2(q).predicted_T;
    CHECK(T <= prev);
    prev = T;
  }
}

TEST_CASE("random draws certify for every lemma") {
  for (auto lemma : {RecursionLemma::kCase1, RecursionLemma::kCase2, RecursionLemma::kLemma6}) {
    const auto v = verify_recursion(lemma, 200, 123);
    CAPTURE(lemma_cli_name(lemma));
    CHECK(v.all_certified());
    for (const auto& o : v.outcomes) CHECK(o.bound.all_satisfied());
    if (lemma == RecursionLemma::kLemma6) CHECK(v.max_floor_abs_err <= kFloorIdentityTolerance);
  }
}

TEST_CASE("lemma names round trip") {
  for (auto lemma : {RecursionLemma::kCase1, RecursionLemma::kCase2, RecursionLemma::kLemma6}) {
    CHECK(parse_lemma(lemma_cli_name(lemma)) == lemma);
  }
  CHECK(lemma_cli_name(RecursionLemma::kLemma6) == "recurse2lemma6");
  CHECK_THROWS_AS(parse_lemma("recurse3"), Error);
}
