// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trontrain/distributions.hpp"
#include "trontrain/error.hpp"
#include "trontrain/glm_tron.hpp"

using namespace tt;

namespace {

Dataset ball_data(const RealVector& w, const Activation& act, std::size_t count, std::uint64_t seed,
                  double noise = 0.0) {
  const auto xs = sample(InputDistribution::unit_ball(w.dim()), seed, count);
  Rng rng = make_rng(seed, 1);
  Dataset d;
  for (const auto& x : xs) d.push_back({x, act.fn(dot(w, x)) + (noise > 0 ? uniform(rng, -noise, noise) : 0.0)});
  return d;
}

RealVector random_unit(std::size_t n, Rng& rng) {
  RealVector v(n);
  for (auto& x : v) x = standard_normal(rng);
  return (1.0 / norm(v)) * v;
}

}  // namespace

TEST_CASE("hand-traced single step") {
  const Dataset d({{RealVector{1.0}, 0.5}});
  GlmTronConfig cfg;
  cfg.epsilon = 0.5;
  const auto tr = glm_tron_run(d, cfg, RealVector{0.5});
  REQUIRE(tr.iterates.size() >= 2);
  CHECK(tr.iterates[0] == RealVector{0.0});
  CHECK(tr.iterates[1] == RealVector{0.5});
  CHECK(tr.effective_erm[1] == 0.0);
}

TEST_CASE("all-zero labels keep iterates at zero") {
  Dataset d;
  for (double v : {0.3, -0.2, 0.9}) d.push_back({RealVector{v, 0.1}, 0.0});
  GlmTronConfig cfg;
  cfg.max_iters = 25;
  const auto tr = glm_tron_run(d, cfg);
  for (const auto& w : tr.iterates) CHECK(w == RealVector{0.0, 0.0});
  CHECK(tr.effective_erm.empty());
}

TEST_CASE("realizable run reaches epsilon at T = ceil(||w*||/eps)") {
  const RealVector w{0.6, 0.8};
  const Activation act = Activation::relu();
  const Dataset d = ball_data(w, act, 200, 31);
  GlmTronConfig cfg;
  cfg.epsilon = 0.05;
  const auto tr = glm_tron_run(d, cfg, w);
  CHECK(tr.iterates.size() == 21);  // w_1 plus 20 updates
  CHECK(tr.effective_erm.back() < cfg.epsilon);
}

TEST_CASE("requires inputs inside the unit ball") {
  const Dataset d({{RealVector{2.0}, 1.0}});
  CHECK_THROWS_AS(glm_tron_run(d, GlmTronConfig{}), Error);
}

TEST_CASE("step-decrease examples") {
  const RealVector w{0.6, 0.8};
  const Activation act = Activation::relu();
  const Dataset d = ball_data(w, act, 100, 32);
  GlmTronConfig cfg;
  cfg.epsilon = 0.05;
  const auto tr = glm_tron_run(d, cfg, w);
  for (bool ok : check_step_decrease(tr, d, act, w, 0.0, 1.0)) CHECK(ok);

  GlmTronTrace one;
  one.iterates = {RealVector{0.0, 0.0}};
  CHECK(check_step_decrease(one, d, act, w, 0.0, 1.0).empty());
}

TEST_CASE("step-decrease property over activations and bounded noise") {
  Rng rng = make_rng(33);
  const Activation acts[] = {Activation::relu(), Activation::leaky(0.3), Activation::clipped_linear()};
  int instances = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Activation& act = acts[trial % 3];
    const std::size_t n = 2 + trial % 4;
    const RealVector w = uniform(rng, 0.3, 1.0) * random_unit(n, rng);
    const double theta = (trial % 2 == 0) ? 0.0 : uniform(rng, 0.0, 0.1);
    const Dataset d = ball_data(w, act, 80, 1000 + trial, theta);
    GlmTronConfig cfg;
    cfg.activation = act;
    cfg.epsilon = 0.05;
    const auto tr = glm_tron_run(d, cfg, w);
    // The residual bound is the exact value at w; W bounds every distance.
    const double eta = residual_norm(d, act, w);
    double W = 0.0;
    for (const auto& it : tr.iterates) W = std::max(W, norm(it - w));
    for (const auto& c : check_step_decrease_detailed(tr, d, act, w, eta, W)) {
      CHECK(c.holds);
      CHECK(c.lhs <= c.rhs + kInequalitySlack);
    }
    ++instances;
  }
  CHECK(instances == 60);
}

TEST_CASE("too-small W is a hypothesis error") {
  const RealVector w{0.6, 0.8};
  const Activation act = Activation::relu();
  const Dataset d = ball_data(w, act, 50, 34);
  GlmTronConfig cfg;
  const auto tr = glm_tron_run(d, cfg, w);
  CHECK_THROWS_AS(check_step_decrease(tr, d, act, w, 0.0, 1e-6), Error);
}

TEST_CASE("noise_risk_certificate plug-in values") {
  CHECK(noise_risk_certificate(0.0, 0.0, 1.0, 0.05, 0.0, 1.0).bound == doctest::Approx(0.05));
  const double e2 = 0.01 / 3.0;  // second moment of Unif[-0.1, 0.1]
  CHECK(noise_risk_certificate(0.0, e2, 1.0, 0.0, 0.1, 1.0).bound == doctest::Approx(e2 + 0.41));
  const auto c = noise_risk_certificate(0.5, 0.0, 1.0, 0.05, 0.0, 1.0);
  CHECK_FALSE(c.holds);
  CHECK_THROWS_AS(noise_risk_certificate(0.0, 0.0, 2.0, 0.05, 0.0, 1.0), Error);
}

TEST_CASE("activations") {
  CHECK(Activation::relu().fn(-1.0) == 0.0);
  CHECK(Activation::leaky(0.2).fn(-1.0) == doctest::Approx(-0.2));
  CHECK(Activation::clipped_linear().fn(3.0) == 1.0);
  CHECK(Activation::by_name("clipped_linear").fn(0.5) == 0.5);
  CHECK_THROWS_AS(Activation::by_name("tanh"), Error);
  CHECK_THROWS_AS(Activation::leaky(1.5), Error);
}

TEST_CASE("trace CSV layout") {
  const RealVector w{0.6, 0.8};
  const Dataset d = ball_data(w, Activation::relu(), 20, 35);
  GlmTronConfig cfg;
  cfg.epsilon = 0.5;
  const auto tr = glm_tron_run(d, cfg, w);
  std::ostringstream out;
  write_glm_trace_csv(tr, out);
  const std::string s = out.str();
  CHECK(s.rfind("t,w_norm_err,effective_erm,true_erm\n1,", 0) == 0);
}
