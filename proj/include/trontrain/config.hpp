// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "trontrain/adversary.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

enum class Algorithm { kGlmTron, kReluTron, kNeuroTron, kVerifyRecursion };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct DistributionSpec {
  std::string kind = "uniform_box";  // uniform_box, isotropic_gaussian, unit_ball, unit_sphere
  RealVector low, high;
  std::size_t n = 0;
  double sigma = 1.0;

  InputDistribution build() const;
  // "box:LOW:HIGH:N", "gaussian:N:SIGMA", "ball:N" or "sphere:N".
  static DistributionSpec parse(const std::string& text);
};

struct BetaSpec {
  std::string kind = "constant";  // constant, indicator_halfspace
  double p = 0.0;
  RealVector v;

  AttackProbability build() const;
  // "constant:P", "halfspace:P:v1,v2,..." or a bare number P.
  static BetaSpec parse(const std::string& text);
};

struct OracleSpec {
  RealVector w_star;
  double theta_star = 0.0;
  BetaSpec beta;
  std::string perturbation = "uniform";
  bool perturbation_defaulted = true;
  RealVector w_adv;           // realization only
  double support_radius = 0;  // realization only; 0 selects the distribution radius

  OracleConfig build(const InputDistribution& dist) const;
};

struct ReluTronSpec {
  std::string which_case = "auto";  // auto, I, II
  std::size_t batch = 8;
  double delta0 = 1.0;
  std::size_t mc_samples = kAcceptanceMcSamples;
  double K = 0.0;      // <= 0: 2 / lambda1
  double gamma = 0.0;  // <= 0: twice the lower bound
  RealVector w_init;   // empty: zero vector
  std::size_t steps = 0;  // 0: predicted_T
};

struct GlmTronSpec {
  std::string activation = "relu";
  double leaky_alpha = 0.1;
  std::size_t samples = 200;
  RealVector w_star;
  std::string noise = "none";  // none, uniform
  double noise_theta = 0.0;
  std::size_t max_iters = 1000;
  std::string dataset;  // optional CSV; overrides sampling
};

struct NeuroTronSpec {
  std::size_t r = 3, n = 4, half_width = 2;
  double alpha = 0.0;
  std::size_t wishart_dof = 64;
  double c_norm = 0.05;
  std::size_t samples = 100;  // before symmetrization
  double noise_theta = 0.0;
  double mu_factor = 1.5;  // mu = factor * lower bound, theta > 0 only
  double gamma = 0.0;
  double eta = 0.0;        // <= 0: schedule step size
  std::size_t max_iters = 0;  // 0: predicted_T
};

struct RecursionSpec {
  std::string lemma = "recurse1";
  std::size_t draws = 500;
};

struct AssertionSpec {
  std::optional<double> min_success_rate;
  std::optional<double> max_final_error;
  std::optional<double> max_effective_erm;
  bool require_all_certified = true;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kReluTron;
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
  double eps = 1e-2;
  double delta = 0.1;
  DistributionSpec distribution;
  OracleSpec oracle;
  ReluTronSpec relu_tron;
  GlmTronSpec glm_tron;
  NeuroTronSpec neurotron;
  RecursionSpec verify_recursion;
  AssertionSpec assertions;

  void validate() const;
};

ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> theta_star;
  std::optional<std::string> beta;
  std::optional<std::size_t> batch;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<std::size_t> repeats;
};

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tt
