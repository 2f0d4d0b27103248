// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trontrain/error.hpp"
#include "trontrain/relu_tron.hpp"

using namespace tt;

namespace {

const RealVector kWStar{-1.0, 1.0};

InputDistribution square() { return InputDistribution::uniform_cube(2, -1.0, 1.0); }

MomentEstimates moments(double theta, double beta, std::size_t mc = 100000) {
  return estimate_moments(square(), kWStar, theta, AttackProbability::constant(beta), mc, 17);
}

OracleSample sample_of(RealVector x, double y) {
  OracleReply r;
  r.y = y;
  return {std::move(x), r};
}

}  // namespace

TEST_CASE("step examples") {
  const double eta = 0.1;
  const RealVector w0{0.0, 0.0};
  const auto w1 = relu_tron_step(w0, {sample_of({1.0, 0.0}, 0.7)}, 0.0, eta);
  CHECK(w1[0] == doctest::Approx(0.07));
  CHECK(w1[1] == 0.0);

  // Labels at or below theta* are inactive.
  const auto same = relu_tron_step(w0, {sample_of({1.0, 0.0}, 0.2), sample_of({0.0, 1.0}, 0.1)}, 0.2, eta);
  CHECK(same == w0);

  const auto g1 = relu_tron_gradient(w0, {sample_of({1.0, 2.0}, 0.5)}, 0.0);
  const auto g2 = relu_tron_gradient(w0, {sample_of({1.0, 2.0}, 0.5), sample_of({3.0, 3.0}, 0.0)}, 0.0);
  CHECK(g2[0] == doctest::Approx(0.5 * g1[0]));
  CHECK(g2[1] == doctest::Approx(0.5 * g1[1]));
}

TEST_CASE("w* is a fixed point at theta* = 0") {
  Rng rng = make_rng(1);
  OracleConfig oracle;
  oracle.w_star = kWStar;
  std::vector<OracleSample> batch;
  for (int i = 0; i < 64; ++i) {
    RealVector x = square().draw(rng);
    batch.emplace_back(x, query(oracle, x, rng));
  }
  const auto g = relu_tron_gradient(kWStar, batch, 0.0);
  CHECK(g == RealVector{0.0, 0.0});
}

TEST_CASE("case1_schedule on the square") {
  const auto m = moments(0.0, 0.0);
  const auto c = case1_schedule(m, 8, 1.0, norm(kWStar), 1e-2, 0.1);
  CHECK(c.which == TheoremCase::kI);
  CHECK(c.alpha_rate > 0.0);
  CHECK(c.alpha_rate < 1.0);
  CHECK(c.b1p == doctest::Approx(2.0 * m.lambda1_theta));
  CHECK(c.c1p == doctest::Approx((m.a4 + m.a2 * m.a2 * 7.0) / 8.0));
  CHECK(c.alpha_rate == doctest::Approx(case1_alpha_closed_form(m, 8, 1.0)).epsilon(1e-12));
  CHECK(c.predicted_T >= 1);
  CHECK(c.predicted_floor == 0.0);
}

TEST_CASE("predicted_T is non-increasing in the batch size") {
  const auto m = moments(0.0, 0.0);
  std::int64_t prev = INT64_MAX;
  for (std::size_t b : {1, 2, 4, 8, 16, 32}) {
    const auto c = case1_schedule(m, b, 1.0, norm(kWStar), 1e-2, 0.1);
    CHECK(c.predicted_T <= prev);
    prev = c.predicted_T;
  }
}

TEST_CASE("case1 hypothesis guard names the violated inequality") {
  auto m = moments(0.0, 0.0);
  // Pushing lambda1 up makes b1 large enough to break c1 > b1^2 d0/(1+d0)^2.
  m.lambda1_theta = 10.0;
  try {
    (void)case1_schedule(m, 8, 1.0, 1.0, 1e-2, 0.1);
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kHypothesis);
    CHECK(std::string(e.what()).find("c1 > b1^2*delta0/(1+delta0)^2") != std::string::npos);
  }
}

TEST_CASE("case2_schedule plug-in checks") {
  const auto m = moments(0.05, 0.2);
  const auto c = case2_schedule(m, 8, 0.0, 0.0, norm(kWStar), 0.3, 0.5);
  CHECK(c.which == TheoremCase::kII);
  CHECK(std::isfinite(c.eta));
  CHECK(c.predicted_floor > 0.0);
  CHECK(c.predicted_T >= 1);
  CHECK(c.K == doctest::Approx(2.0 / m.lambda1_theta));
  CHECK(c.b1p == doctest::Approx(1.5 * m.lambda1_theta));
  CHECK(c.target == doctest::Approx(0.3 * 0.3 * 0.5));
  // Both noise constants scale with theta*^2.
  CHECK(c.c2 == doctest::Approx(0.05 * 0.05 * c.c2p));
  CHECK(c.c3 == doctest::Approx(0.05 * 0.05 * c.c3p));

  const auto k1 = case2_schedule(m, 8, 1.0 / m.lambda1_theta, 0.0, norm(kWStar), 0.3, 0.5);
  CHECK(k1.b1p == doctest::Approx(m.lambda1_theta));
}

TEST_CASE("case2 at theta* = 0 has zero floor") {
  const auto m = moments(0.0, 0.2);
  const auto c = case2_schedule(m, 8, 0.0, 0.0, norm(kWStar), 1e-2, 0.1);
  CHECK(c.predicted_floor == 0.0);
  CHECK(c.c2 == 0.0);
  CHECK(c.c3 == 0.0);
}

TEST_CASE("case2 rejects gamma at or below its lower bound") {
  const auto m = moments(0.05, 0.2);
  const auto ok = case2_schedule(m, 8, 0.0, 0.0, norm(kWStar), 0.3, 0.5);
  const double lb = ok.gamma / 2.0;
  try {
    (void)case2_schedule(m, 8, 0.0, lb, norm(kWStar), 0.3, 0.5);
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kHypothesis);
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}

TEST_CASE("Case I training succeeds on the square") {
  const auto m = moments(0.0, 0.0, 200000);
  const auto sched = case1_schedule(m, 8, 1.0, norm(kWStar), 1e-2, 0.1);
  OracleConfig oracle;
  oracle.w_star = kWStar;
  ReluTronConfig cfg;
  cfg.batch = 8;
  cfg.eta = sched.eta;
  cfg.w_init = RealVector(2);
  TrainOptions opts;
  opts.repeats = 20;
  opts.seed = 5;
  const auto rep = relu_tron_train(square(), oracle, cfg, sched, opts);
  CHECK(rep.steps == static_cast<std::size_t>(sched.predicted_T));
  CHECK(rep.mean_trajectory.size() == rep.steps + 1);
  CHECK(rep.success_threshold == doctest::Approx(1e-4));
  CHECK(rep.success_rate >= 0.9);
  CHECK(rep.traces.size() == 20);
}

TEST_CASE("starting at w* with honest labels stays at w*") {
  const auto m = moments(0.0, 0.0);
  const auto sched = case1_schedule(m, 4, 1.0, 1.0, 1e-2, 0.1);
  OracleConfig oracle;
  oracle.w_star = kWStar;
  ReluTronConfig cfg;
  cfg.batch = 4;
  cfg.eta = sched.eta;
  cfg.w_init = kWStar;
  cfg.max_iters = 50;
  TrainOptions opts;
  opts.repeats = 3;
  const auto rep = relu_tron_train(square(), oracle, cfg, sched, opts);
  for (const auto& w : rep.final_iterates) CHECK(w == kWStar);
}

TEST_CASE("training is deterministic in the seed") {
  const auto m = moments(0.05, 0.2);
  const auto sched = case2_schedule(m, 8, 0.0, 0.0, norm(kWStar), 0.3, 0.5);
  OracleConfig oracle;
  oracle.w_star = kWStar;
  oracle.theta_star = 0.05;
  oracle.beta = AttackProbability::constant(0.2);
  ReluTronConfig cfg;
  cfg.batch = 8;
  cfg.eta = sched.eta;
  cfg.w_init = RealVector(2);
  cfg.max_iters = 100;
  TrainOptions opts;
  opts.repeats = 4;
  opts.seed = 9;
  const auto a = relu_tron_train(square(), oracle, cfg, sched, opts);
  const auto b = relu_tron_train(square(), oracle, cfg, sched, opts);
  CHECK(a.final_sq_err == b.final_sq_err);
}

TEST_CASE("term-one conditional inequality at checkpoints") {
  const double theta = 0.05;
  const auto m = moments(theta, 0.2);
  OracleConfig oracle;
  oracle.w_star = kWStar;
  oracle.theta_star = theta;
  oracle.beta = AttackProbability::constant(0.2);
  for (const RealVector& w : {RealVector{0.0, 0.0}, RealVector{-0.5, 0.4}, RealVector{-1.2, 1.1}}) {
    const auto c = term1_check(square(), oracle, w, m, 100000, 3);
    CHECK(c.holds);
  }
}

TEST_CASE("sq_err CSV") {
  std::ostringstream out;
  write_sq_err_trace_csv({1.0, 0.5}, out);
  CHECK(out.str() == "t,sq_err\n1,1\n2,0.5\n");
  CHECK(case_name(TheoremCase::kII) == "II");
}
