// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "trontrain/acceptance.hpp"
#include "trontrain/error.hpp"
#include "trontrain/experiment.hpp"
#include "trontrain/serialization.hpp"

using namespace tt;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) {
  const char* s = std::getenv("TRONTRAIN_SOURCE_DIR");
  return std::string(s ? s : TRONTRAIN_TEST_SOURCE_DIR) + "/configs/" + name + ".toml";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("trontrain_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("bundled case1 config passes its assertions") {
  auto cfg = load_config(config_path("case1_unif2d"));
  cfg.relu_tron.mc_samples = 200000;
  const auto res = run_experiment(cfg, {});
  CHECK(res.exit_code == 0);
  CHECK(res.summary["empirical"]["success_rate"].get<double>() >= 0.9);
  const auto T = res.summary["schedule"]["predicted_T"].get<std::int64_t>();
  CHECK(res.summary["empirical"]["steps"].get<std::int64_t>() == T);
  CHECK(res.summary["provenance"]["kind"] == "monte_carlo");
  CHECK(res.summary.contains("config_hash"));
}

TEST_CASE("dry run computes the schedule only") {
  const auto dir = scratch("dry");
  RunOptions opts;
  opts.dry_run = true;
  opts.out_dir = dir.string();
  auto cfg = load_config(config_path("case1_unif2d"));
  cfg.relu_tron.mc_samples = 10000;
  const auto res = run_experiment(cfg, opts);
  CHECK(res.summary.contains("schedule"));
  CHECK_FALSE(res.summary.contains("empirical"));
  CHECK_FALSE(fs::exists(dir / "summary.json"));
}

TEST_CASE("invalid gamma is rejected with the violated bound named") {
  try {
    (void)run_experiment(load_config(config_path("invalid_gamma")), {});
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kHypothesis);
    const std::string msg = e.what();
    CHECK(msg.find("gamma = 1") != std::string::npos);
    CHECK(msg.find("gamma > max{b1'^2/c1'") != std::string::npos);
  }
}

TEST_CASE("same config and seed give byte-identical artifacts") {
  auto cfg = load_config(config_path("case2_floor"));
  cfg.repeats = 4;
  cfg.relu_tron.mc_samples = 20000;
  cfg.relu_tron.steps = 300;
  const auto a = scratch("det_a"), b = scratch("det_b");
  (void)run_experiment(cfg, {a.string(), false});
  (void)run_experiment(cfg, {b.string(), false});
  REQUIRE(fs::exists(a / "summary.json"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  for (int r = 0; r < 4; ++r) {
    const std::string f = "trace_" + std::to_string(r) + ".csv";
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string first = slurp(a / "trace_0.csv");
  CHECK(first.rfind("t,sq_err\n1,", 0) == 0);

  cfg.seed += 1;
  const auto c = scratch("det_c");
  (void)run_experiment(cfg, {c.string(), false});
  CHECK(slurp(a / "summary.json") != slurp(c / "summary.json"));
  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("summary embeds config hash and provenance") {
  auto cfg = load_config(config_path("case2_floor"));
  cfg.repeats = 2;
  cfg.relu_tron.mc_samples = 20000;
  cfg.relu_tron.steps = 50;
  const auto res = run_experiment(cfg, {});
  CHECK(res.summary["config_hash"] == config_hash(cfg));
  CHECK(res.summary["config_hash"].get<std::string>().size() == 16);
  CHECK(res.summary["provenance"].contains("std_err"));
  CHECK(res.summary["schedule"]["case"] == "II");

  auto other = cfg;
  other.relu_tron.batch = 4;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("realization attack converges to w_adv") {
  auto cfg = load_config(config_path("realization_attack"));
  cfg.relu_tron.mc_samples = 100000;
  const auto res = run_experiment(cfg, {});
  CHECK(res.exit_code == 0);
  for (const auto& e : res.summary["empirical"]["final_sq_err"]) CHECK(e.get<double>() < 1e-6);
}

TEST_CASE("glm and neurotron configs pass") {
  for (const char* name : {"glm_unit_ball", "glm_noisy", "neurotron_sampled"}) {
    CAPTURE(name);
    const auto res = run_experiment(load_config(config_path(name)), {});
    CHECK(res.exit_code == 0);
  }
  const auto noisy = run_experiment(load_config(config_path("glm_noisy")), {});
  CHECK(noisy.summary["empirical"].contains("risk_certificate"));
}

TEST_CASE("recursion config writes the draw table") {
  const auto dir = scratch("rec");
  const auto res = run_experiment(load_config(config_path("recursion_lemma6")), {dir.string(), false});
  CHECK(res.exit_code == 0);
  const std::string csv = slurp(dir / "trace_0.csv");
  CHECK(csv.rfind("draw,predicted_T,alpha,beta,eps_prime_sq,final_delta,certified\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("acceptance meta-test: zero tolerance makes Monte-Carlo criteria fail") {
  AcceptanceOptions opts;
  CHECK(run_criterion("2", opts).pass);
  opts.tolerance_scale = 0.0;
  CHECK_FALSE(run_criterion("1a", opts).pass);
  CHECK_FALSE(run_criterion("2", opts).pass);
}

TEST_CASE("acceptance registry") {
  const auto& ids = criterion_ids();
  CHECK(ids.size() == 14);
  CHECK(ids.front() == "1a");
  CHECK(ids.back() == "10");
  CHECK_THROWS_AS(run_criterion("99"), Error);
  const auto r = run_criterion("9a");
  CHECK(format_result(r).rfind(r.pass ? "[PASS] 9a" : "[FAIL] 9a", 0) == 0);
}

TEST_CASE("serialization round trips") {
  MomentEstimates m;
  m.a1 = 0.1;
  m.a4 = 0.4;
  m.beta2 = 0.02;
  m.lambda1_theta = 1.0 / 6;
  m.theta_star = 0.05;
  m.n_samples = 12345;
  const auto back = moments_from_json(moments_to_json(m));
  CHECK(back.a1 == m.a1);
  CHECK(back.a4 == m.a4);
  CHECK(back.beta2 == m.beta2);
  CHECK(back.lambda1_theta == m.lambda1_theta);
  CHECK(back.n_samples == m.n_samples);

  NetClass nc;
  nc.alpha = 0.1;
  nc.patches = {RealMatrix{{1.0, 2.0}}, RealMatrix{{3.0, 4.0}}};
  const Json j = net_class_to_json(nc);
  CHECK(j["width"] == 2);
  const NetClass nb = net_class_from_json(j);
  CHECK(nb.alpha == 0.1);
  CHECK(nb.patches[1] == nc.patches[1]);

  OracleConfig o;
  o.w_star = {1.0, 0.0};
  o.theta_star = 0.2;
  o.beta = AttackProbability::indicator_halfspace({0.0, 1.0}, 0.4);
  const OracleConfig ob = oracle_from_json(oracle_to_json(o));
  CHECK(ob.theta_star == 0.2);
  CHECK(ob.beta.p() == 0.4);
  CHECK(ob.beta.v() == RealVector{0.0, 1.0});

  o.beta = AttackProbability::custom([](const RealVector&) { return 0.5; }, "half");
  CHECK_THROWS_AS(oracle_to_json(o), Error);
}
