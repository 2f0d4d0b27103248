// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library through the C API only.
#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "trontrain/trontrain.h"

namespace {

using Json = nlohmann::json;

// Exit codes: 0 success, 1 assertion or criterion failure, 2 library error.
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

int report_error(tt_status s) {
  std::fprintf(stderr, "trontrain: %s: %s\n", tt_status_name(s), tt_last_error());
  return kExitError;
}

// Owns a string returned by the library.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tt_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::string format_result_line(const Json& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "[%s] %-3s measured=%-12.6g tol=%-12.6g ", r["pass"].get<bool>() ? "PASS" : "FAIL",
                r["id"].get<std::string>().c_str(), r["measured"].is_number() ? r["measured"].get<double>() : NAN,
                r["tolerance"].is_number() ? r["tolerance"].get<double>() : NAN);
  return buf + r["detail"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trontrain: robust Tron-family training experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tt_version()));

  // run
  auto* run = app.add_subcommand("run", "Run an experiment from a TOML config");
  std::string config_path, out_dir = "out";
  bool dry_run = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta_star, eps, delta;
  std::optional<std::string> beta;
  std::optional<std::size_t> batch, repeats;
  run->add_option("config", config_path, "Experiment TOML file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory for summary.json and traces")->capture_default_str();
  run->add_flag("--dry-run", dry_run, "Print the schedule constants only; no training, no files");
  run->add_option("--theta-star", theta_star, "Override oracle.theta_star");
  run->add_option("--beta", beta, "Override oracle.beta (P, constant:P, halfspace:P:v1,v2,...)");
  run->add_option("--batch", batch, "Override relu_tron.batch");
  run->add_option("--eps", eps, "Override eps");
  run->add_option("--delta", delta, "Override delta");
  run->add_option("--repeats", repeats, "Override repeats");

  // accept
  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  std::uint64_t accept_seed = 20240601;
  std::string only;
  double tol_scale = 1.0;
  bool list = false;
  accept->add_option("--seed", accept_seed, "Suite seed")->capture_default_str();
  accept->add_option("--only", only, "Run a single criterion id");
  accept->add_option("--tolerance-scale", tol_scale, "Multiply every tolerance (0 makes checks strict)")
      ->capture_default_str();
  accept->add_flag("--list", list, "List criterion ids and exit");

  // verify-recursion
  auto* verify = app.add_subcommand("verify-recursion", "Certify a recursion lemma on random parameter draws");
  std::string lemma;
  std::size_t draws = 500;
  std::uint64_t verify_seed = 0;
  verify->add_option("--lemma", lemma, "recurse1, recurse2 or recurse2lemma6")
      ->required()
      ->check(CLI::IsMember({"recurse1", "recurse2", "recurse2lemma6"}));
  verify->add_option("--draws", draws, "Number of draws")->capture_default_str();
  verify->add_option("--seed", verify_seed, "Seed")->capture_default_str();

  // moments
  auto* moments = app.add_subcommand("moments", "Monte-Carlo distributional constants");
  std::string dist_spec, moment_beta = "0";
  std::vector<double> w_star;
  double moment_theta = 0.0;
  std::size_t samples = 1000000;
  std::uint64_t moment_seed = 0;
  moments->add_option("dist", dist_spec, "box:LOW:HIGH:N, gaussian:N:SIGMA, ball:N or sphere:N")->required();
  moments->add_option("--w-star", w_star, "Ground-truth weight, comma or space separated")
      ->required()
      ->delimiter(',');
  moments->add_option("--theta-star", moment_theta, "Corruption bound")->capture_default_str();
  moments->add_option("--beta", moment_beta, "Attack probability spec")->capture_default_str();
  moments->add_option("--samples", samples, "Monte-Carlo samples")->capture_default_str();
  moments->add_option("--seed", moment_seed, "Seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    Json overrides = Json::object();
    if (seed) overrides["seed"] = *seed;
    if (theta_star) overrides["theta_star"] = *theta_star;
    if (beta) overrides["beta"] = *beta;
    if (batch) overrides["batch"] = *batch;
    if (eps) overrides["eps"] = *eps;
    if (delta) overrides["delta"] = *delta;
    if (repeats) overrides["repeats"] = *repeats;
    OwnedString summary;
    int passed = 0;
    const tt_status s = tt_run_experiment(config_path.c_str(), overrides.dump().c_str(), out_dir.c_str(),
                                          dry_run ? 1 : 0, &summary.p, &passed);
    if (s != TT_OK) return report_error(s);
    const Json j = Json::parse(summary.str());
    if (dry_run) {
      std::cout << j["schedule"].dump(2) << "\n";
      return 0;
    }
    std::cout << "config_hash " << j["config_hash"].get<std::string>() << "\n";
    if (j.contains("empirical")) std::cout << j["empirical"].dump(2) << "\n";
    for (const auto& a : j["assertions"]) {
      std::cout << (a["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << a["name"].get<std::string>() << " value="
                << a["value"] << " threshold=" << a["threshold"] << "\n";
    }
    std::cout << "wrote " << out_dir << "/summary.json\n";
    return passed ? 0 : kExitFailed;
  }

  if (*accept) {
    if (list) {
      OwnedString ids;
      const tt_status s = tt_acceptance_list(&ids.p);
      if (s != TT_OK) return report_error(s);
      std::cout << ids.str() << "\n";
      return 0;
    }
    OwnedString report;
    int all = 0;
    const tt_status s =
        tt_acceptance_run(only.empty() ? nullptr : only.c_str(), accept_seed, tol_scale, &report.p, &all);
    if (s != TT_OK) return report_error(s);
    const Json arr = Json::parse(report.str());
    std::size_t passed = 0;
    for (const auto& r : arr) {
      std::cout << format_result_line(r) << "\n";
      if (r["pass"].get<bool>()) ++passed;
    }
    std::cout << passed << "/" << arr.size() << " criteria passed\n";
    return all ? 0 : kExitFailed;
  }

  if (*verify) {
    OwnedString report;
    int all = 0;
    const tt_status s = tt_verify_recursion(lemma.c_str(), draws, verify_seed, &report.p, &all);
    if (s != TT_OK) return report_error(s);
    const Json j = Json::parse(report.str());
    std::printf("%-6s %-12s %-14s %-14s %-14s %s\n", "draw", "predicted_T", "alpha", "eps'^2", "Delta_T", "result");
    for (const auto& r : j["rows"]) {
      std::printf("%-6zu %-12" PRId64 " %-14.6g %-14.6g %-14.6g %s\n", r["draw"].get<std::size_t>(),
                  r["predicted_T"].get<std::int64_t>(), r["alpha"].get<double>(), r["eps_prime_sq"].get<double>(),
                  r["final_delta"].get<double>(), r["certified"].get<bool>() ? "PASS" : "FAIL");
    }
    std::printf("%s: %zu/%zu certified", lemma.c_str(), j["certified"].get<std::size_t>(), j["draws"].get<std::size_t>());
    if (j.contains("max_floor_abs_err")) std::printf(", max |floor - beta/(1-alpha)| = %.3g", j["max_floor_abs_err"].get<double>());
    std::printf("\n");
    return all ? 0 : kExitFailed;
  }

  if (*moments) {
    tt_distribution* dist = nullptr;
    tt_status s = tt_distribution_parse(dist_spec.c_str(), &dist);
    if (s != TT_OK) return report_error(s);
    tt_moments* m = nullptr;
    s = tt_moments_estimate(dist, w_star.data(), w_star.size(), moment_theta, moment_beta.c_str(), samples,
                            moment_seed, &m);
    tt_distribution_free(dist);
    if (s != TT_OK) return report_error(s);
    OwnedString json;
    s = tt_moments_to_json(m, &json.p);
    tt_moments_free(m);
    if (s != TT_OK) return report_error(s);
    std::cout << json.str() << "\n";
    return 0;
  }
  return 0;
}
