// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <string>

#include "trontrain/config.hpp"
#include "trontrain/error.hpp"
#include "trontrain/serialization.hpp"

using namespace tt;

namespace {

std::string source_dir() {
  const char* s = std::getenv("TRONTRAIN_SOURCE_DIR");
  return s ? s : TRONTRAIN_TEST_SOURCE_DIR;
}

ErrorCode parse_code(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse_config to throw");
  return ErrorCode::kInvalidArgument;
}

const char* kMinimal = R"(
algorithm = "relu_tron"
[distribution]
low = [-1.0, -1.0]
high = [1.0, 1.0]
[oracle]
w_star = [-1.0, 1.0]
)";

}  // namespace

TEST_CASE("every bundled config loads") {
  for (const char* name : {"case1_unif2d", "case2_floor", "invalid_gamma", "realization_attack", "glm_unit_ball",
                           "glm_noisy", "neurotron_sampled", "recursion_lemma6"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(source_dir() + "/configs/" + name + ".toml"));
  }
}

TEST_CASE("case1 config fields") {
  const auto c = load_config(source_dir() + "/configs/case1_unif2d.toml");
  CHECK(c.algorithm == Algorithm::kReluTron);
  CHECK(c.repeats == 50);
  CHECK(c.eps == 1e-2);
  CHECK(c.delta == 0.1);
  CHECK(c.relu_tron.batch == 8);
  CHECK(c.relu_tron.which_case == "I");
  CHECK(c.oracle.w_star == RealVector{-1.0, 1.0});
  REQUIRE(c.assertions.min_success_rate.has_value());
  CHECK(*c.assertions.min_success_rate == 0.9);
}

TEST_CASE("defaults for a minimal config") {
  const auto c = parse_config(kMinimal);
  CHECK(c.distribution.kind == "uniform_box");
  CHECK(c.distribution.n == 2);
  CHECK(c.oracle.perturbation_defaulted);
  CHECK(c.relu_tron.which_case == "auto");
  CHECK(c.repeats == 1);
}

TEST_CASE("parse errors") {
  CHECK(parse_code("algorithm = ") == ErrorCode::kParse);
  CHECK(parse_code("seed = 1") == ErrorCode::kParse);  // missing algorithm
  CHECK(parse_code("algorithm = \"sgd\"") == ErrorCode::kParse);
  CHECK(parse_code(std::string(kMinimal) + "bogus_key = 1\n") == ErrorCode::kParse);
  CHECK(parse_code(std::string(kMinimal) + "[relu_tron]\ncase = \"III\"\n") == ErrorCode::kParse);
  CHECK(parse_code(std::string(kMinimal) + "[relu_tron]\nbatch = \"eight\"\n") == ErrorCode::kParse);
  CHECK(parse_code("eps = -1.0\n" + std::string(kMinimal)) == ErrorCode::kInvalidArgument);
  CHECK(parse_code(R"(
algorithm = "relu_tron"
[distribution]
low = [-1.0, -1.0]
high = [1.0, 1.0]
[oracle]
w_star = [-1.0, 1.0, 0.0]
)") == ErrorCode::kDimensionMismatch);
  CHECK_THROWS_AS(load_config("/nonexistent.toml"), Error);
}

TEST_CASE("parse error messages carry a location") {
  try {
    (void)parse_config("algorithm = [", "bad.toml");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("bad.toml:1:", 0) == 0);
  }
}

TEST_CASE("distribution spec strings") {
  const auto box = DistributionSpec::parse("box:-1:1:3").build();
  CHECK(box.dim() == 3);
  CHECK(box.low() == RealVector{-1.0, -1.0, -1.0});
  CHECK(DistributionSpec::parse("gaussian:2:0.5").build().sigma() == 0.5);
  CHECK(DistributionSpec::parse("ball:4").build().dim() == 4);
  CHECK(DistributionSpec::parse("sphere:2").build().support_radius() == 1.0);
  CHECK_THROWS_AS(DistributionSpec::parse("box:1:-1:2").build(), Error);
  CHECK_THROWS_AS(DistributionSpec::parse("cube:2"), Error);
  CHECK_THROWS_AS(DistributionSpec::parse("ball:x"), Error);
}

TEST_CASE("beta spec strings") {
  CHECK(BetaSpec::parse("0.2").build().p() == 0.2);
  CHECK(BetaSpec::parse("constant:0.3").build().p() == 0.3);
  const auto h = BetaSpec::parse("halfspace:0.5:1,0").build();
  CHECK(h.kind() == AttackProbability::Kind::kIndicatorHalfspace);
  CHECK(h.v() == RealVector{1.0, 0.0});
  CHECK_THROWS_AS(BetaSpec::parse("weird:1"), Error);
}

TEST_CASE("overrides and hashing") {
  auto c = load_config(source_dir() + "/configs/case1_unif2d.toml");
  const std::string before = config_to_json(c).dump();
  ConfigOverrides o;
  o.seed = 99;
  o.batch = 16;
  o.beta = "0.25";
  o.theta_star = 0.1;
  apply_overrides(c, o);
  CHECK(c.seed == 99);
  CHECK(c.relu_tron.batch == 16);
  CHECK(c.oracle.beta.p == 0.25);
  CHECK(c.oracle.theta_star == 0.1);
  CHECK(config_to_json(c).dump() != before);

  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("algorithm names round trip") {
  for (auto a : {Algorithm::kGlmTron, Algorithm::kReluTron, Algorithm::kNeuroTron, Algorithm::kVerifyRecursion}) {
    CHECK(parse_algorithm(algorithm_name(a)) == a);
  }
}
