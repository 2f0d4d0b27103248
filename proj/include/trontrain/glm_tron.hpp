// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trontrain/data_model.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

// Non-decreasing, L-Lipschitz gate.
struct Activation {
  std::string name;
  std::function<double(double)> fn;
  double lipschitz = 1.0;

  static Activation relu();
  // alpha in [0, 1]; L = 1.
  static Activation leaky(double alpha);
  // min(max(z, 0), 1); L = 1.
  static Activation clipped_linear();
  static Activation custom(std::string name, std::function<double(double)> fn, double lipschitz);
  static Activation by_name(const std::string& name, double leaky_alpha = 0.0);
};

struct GlmTronConfig {
  Activation activation = Activation::relu();
  std::size_t max_iters = 1000;
  double epsilon = 0.05;

  void validate() const;
};

struct GlmTronTrace {
  std::vector<RealVector> iterates;     // w_1 = 0, then one entry per update
  std::vector<double> effective_erm;    // per iterate; empty without w_ref
  std::vector<double> true_erm;         // per iterate, mean (h_t(x_i) - y_i)^2
  std::vector<double> w_norm_err;       // ||w_t - w_ref||, empty without w_ref
};

// Full-batch GLM-Tron, unit step. Requires ||x_i|| <= 1. With w_ref the run
// length is min(max_iters, ceil(||w_ref|| / epsilon)).
GlmTronTrace glm_tron_run(const Dataset& d, const GlmTronConfig& cfg, const std::optional<RealVector>& w_ref = {});

// (1/S) sum (sigma(w_tᵀx_i) - sigma(wᵀx_i))^2.
double effective_erm(const Dataset& d, const Activation& act, const RealVector& w_t, const RealVector& w);
// (1/S) sum (sigma(w_tᵀx_i) - y_i)^2.
double true_erm(const Dataset& d, const Activation& act, const RealVector& w_t);
// ||(1/S) sum (y_i - sigma(wᵀx_i)) x_i||.
double residual_norm(const Dataset& d, const Activation& act, const RealVector& w);

struct StepDecreaseCheck {
  double lhs = 0.0;  // ||w_{t+1} - w||^2
  double rhs = 0.0;  // ||w_t - w||^2 - (2/L - 1) Ltilde + eta^2 + 2 eta W (L+1)
  bool holds = false;
};

inline constexpr double kInequalitySlack = 1e-9;

// One entry per consecutive pair of iterates. Throws kHypothesis naming the
// failed premise when eta or W is too small for the trace.
std::vector<StepDecreaseCheck> check_step_decrease_detailed(const GlmTronTrace& trace, const Dataset& d,
                                                            const Activation& act, const RealVector& w_ref,
                                                            double residual_bound, double W);
std::vector<bool> check_step_decrease(const GlmTronTrace& trace, const Dataset& d, const Activation& act,
                                      const RealVector& w_ref, double residual_bound, double W);

struct RiskCertificate {
  double bound = 0.0;
  bool holds = false;  // est_true_erm <= bound
};

// E[xi^2] + (L/(2-L)) (eps + theta^2 + 2 theta W (L+1)). Requires 0 < L < 2.
RiskCertificate noise_risk_certificate(double est_true_erm, double noise_second_moment, double L, double epsilon,
                                       double theta, double W);

// GLM-Tron trace CSV: t,w_norm_err,effective_erm,true_erm (t starts at 1).
void write_glm_trace_csv(const GlmTronTrace& trace, std::ostream& out);

}  // namespace tt
