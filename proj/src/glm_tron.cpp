// SPDX-License-Identifier: Apache-2.0
#include "trontrain/glm_tron.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trontrain/error.hpp"

namespace tt {

Activation Activation::relu() { return {"relu", [](double z) { return z > 0.0 ? z : 0.0; }, 1.0}; }

Activation Activation::leaky(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::kInvalidArgument, "leaky activation: alpha must be in [0,1]");
  return {"leaky", [alpha](double z) { return leaky_relu(z, alpha); }, 1.0};
}

Activation Activation::clipped_linear() {
  return {"clipped_linear", [](double z) { return std::clamp(z, 0.0, 1.0); }, 1.0};
}

Activation Activation::custom(std::string name, std::function<double(double)> fn, double lipschitz) {
  if (!fn) fail(ErrorCode::kInvalidArgument, "custom activation: empty function");
  return {std::move(name), std::move(fn), lipschitz};
}

Activation Activation::by_name(const std::string& name, double leaky_alpha) {
  if (name == "relu") return relu();
  if (name == "leaky") return leaky(leaky_alpha);
  if (name == "clipped_linear") return clipped_linear();
  fail(ErrorCode::kInvalidArgument, "unknown activation '" + name + "' (expected relu, leaky, clipped_linear)");
}

void GlmTronConfig::validate() const {
  if (!activation.fn) fail(ErrorCode::kInvalidArgument, "glm_tron: activation has no function");
  const double L = activation.lipschitz;
  if (!(L > 0.0 && L < 2.0)) fail(ErrorCode::kInvalidArgument, "glm_tron: Lipschitz constant must satisfy 0 < L < 2");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorCode::kInvalidArgument, "glm_tron: epsilon must be > 0");
  // Monotonicity spot check on a grid.
  double prev = activation.fn(-4.0);
  for (int i = 1; i <= 64; ++i) {
    const double cur = activation.fn(-4.0 + i * 0.125);
    if (cur < prev) fail(ErrorCode::kInvalidArgument, "glm_tron: activation '" + activation.name + "' is not non-decreasing");
    prev = cur;
  }
}

namespace {

void require_unit_radius(const Dataset& d) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "glm_tron: empty dataset");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (squared_norm(d[i].x) > 1.0 + 1e-12) {
      fail(ErrorCode::kHypothesis, "glm_tron: ||x_" + std::to_string(i) + "|| = " + std::to_string(norm(d[i].x)) +
                                       " violates ||x_i|| <= 1");
    }
  }
}

}  // namespace

double effective_erm(const Dataset& d, const Activation& act, const RealVector& w_t, const RealVector& w) {
  double s = 0.0;
  for (const auto& smp : d.samples()) {
    const double r = act.fn(dot(w_t, smp.x)) - act.fn(dot(w, smp.x));
    s += r * r;
  }
  return s / static_cast<double>(d.size());
}

double true_erm(const Dataset& d, const Activation& act, const RealVector& w_t) {
  double s = 0.0;
  for (const auto& smp : d.samples()) {
    const double r = act.fn(dot(w_t, smp.x)) - smp.y;
    s += r * r;
  }
  return s / static_cast<double>(d.size());
}

double residual_norm(const Dataset& d, const Activation& act, const RealVector& w) {
  RealVector g(d.dim());
  for (const auto& smp : d.samples()) axpy(smp.y - act.fn(dot(w, smp.x)), smp.x, g);
  return norm(g) / static_cast<double>(d.size());
}

GlmTronTrace glm_tron_run(const Dataset& d, const GlmTronConfig& cfg, const std::optional<RealVector>& w_ref) {
  cfg.validate();
  require_unit_radius(d);
  std::size_t steps = cfg.max_iters;
  if (w_ref) {
    w_ref->validate("glm_tron w_ref");
    if (w_ref->dim() != d.dim()) fail(ErrorCode::kDimensionMismatch, "glm_tron: w_ref dimension differs from data");
    const double T = std::ceil(norm(*w_ref) / cfg.epsilon);
    steps = std::min(steps, static_cast<std::size_t>(T));
  }
  const double inv_m = 1.0 / static_cast<double>(d.size());
  GlmTronTrace tr;
  RealVector w(d.dim());
  auto record = [&](const RealVector& cur) {
    tr.iterates.push_back(cur);
    tr.true_erm.push_back(true_erm(d, cfg.activation, cur));
    if (w_ref) {
      tr.effective_erm.push_back(effective_erm(d, cfg.activation, cur, *w_ref));
      tr.w_norm_err.push_back(norm(cur - *w_ref));
    }
  };
  record(w);
  for (std::size_t t = 0; t < steps; ++t) {
    RealVector step(d.dim());
    for (const auto& smp : d.samples()) axpy(smp.y - cfg.activation.fn(dot(w, smp.x)), smp.x, step);
    axpy(inv_m, step, w);
    record(w);
  }
  return tr;
}

std::vector<StepDecreaseCheck> check_step_decrease_detailed(const GlmTronTrace& trace, const Dataset& d,
                                                            const Activation& act, const RealVector& w_ref,
                                                            double residual_bound, double W) {
  require_unit_radius(d);
  const double L = act.lipschitz;
  if (!(L > 0.0 && L < 2.0)) fail(ErrorCode::kInvalidArgument, "check_step_decrease: need 0 < L < 2");
  const double res = residual_norm(d, act, w_ref);
  if (residual_bound < res * (1.0 - 1e-12) - 1e-15) {
    fail(ErrorCode::kHypothesis, "check_step_decrease: residual bound eta = " + std::to_string(residual_bound) +
                                     " is below ||(1/S) sum (y_i - sigma(wᵀx_i)) x_i|| = " + std::to_string(res));
  }
  for (const auto& w : trace.iterates) {
    const double dist = norm(w - w_ref);
    if (dist > W * (1.0 + 1e-12) + 1e-15) {
      fail(ErrorCode::kHypothesis, "check_step_decrease: ||w_t - w|| = " + std::to_string(dist) +
                                       " exceeds W = " + std::to_string(W));
    }
  }
  std::vector<StepDecreaseCheck> out;
  if (trace.iterates.size() < 2) return out;
  const double noise = residual_bound * residual_bound + 2.0 * residual_bound * W * (L + 1.0);
  for (std::size_t t = 0; t + 1 < trace.iterates.size(); ++t) {
    StepDecreaseCheck c;
    c.lhs = squared_distance(trace.iterates[t + 1], w_ref);
    c.rhs = squared_distance(trace.iterates[t], w_ref) -
            (2.0 / L - 1.0) * effective_erm(d, act, trace.iterates[t], w_ref) + noise;
    c.holds = c.lhs - c.rhs <= kInequalitySlack;
    out.push_back(c);
  }
  return out;
}

std::vector<bool> check_step_decrease(const GlmTronTrace& trace, const Dataset& d, const Activation& act,
                                      const RealVector& w_ref, double residual_bound, double W) {
  std::vector<bool> out;
  for (const auto& c : check_step_decrease_detailed(trace, d, act, w_ref, residual_bound, W)) out.push_back(c.holds);
  return out;
}

RiskCertificate noise_risk_certificate(double est_true_erm, double noise_second_moment, double L, double epsilon,
                                       double theta, double W) {
  for (double v : {est_true_erm, noise_second_moment, L, epsilon, theta, W}) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "noise_risk_certificate: non-finite parameter");
  }
  if (!(L > 0.0 && L < 2.0)) fail(ErrorCode::kInvalidArgument, "noise_risk_certificate: invalid Lipschitz constant, need 0 < L < 2");
  RiskCertificate c;
  c.bound = noise_second_moment + (L / (2.0 - L)) * (epsilon + theta * theta + 2.0 * theta * W * (L + 1.0));
  c.holds = est_true_erm <= c.bound;
  return c;
}

void write_glm_trace_csv(const GlmTronTrace& trace, std::ostream& out) {
  out << "t,w_norm_err,effective_erm,true_erm\n";
  const bool ref = !trace.w_norm_err.empty();
  for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
    out << (t + 1) << ',' << (ref ? format_real(trace.w_norm_err[t]) : "") << ','
        << (ref ? format_real(trace.effective_erm[t]) : "") << ',' << format_real(trace.true_erm[t]) << '\n';
  }
}

}  // namespace tt
