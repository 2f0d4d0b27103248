// SPDX-License-Identifier: Apache-2.0
#include "trontrain/adversary.hpp"

#include <cmath>

#include "trontrain/error.hpp"

namespace tt {

std::string perturbation_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::kUniform:
      return "uniform";
    case PerturbationKind::kSignedMax:
      return "signed_max";
    case PerturbationKind::kRealization:
      return "realization";
  }
  return "uniform";
}

PerturbationKind parse_perturbation(const std::string& name) {
  if (name == "uniform") return PerturbationKind::kUniform;
  if (name == "signed_max") return PerturbationKind::kSignedMax;
  if (name == "realization") return PerturbationKind::kRealization;
  fail(ErrorCode::kInvalidArgument, "unknown perturbation '" + name + "' (expected uniform, signed_max, realization)");
}

void OracleConfig::validate() const {
  w_star.validate("oracle w_star");
  if (!(theta_star >= 0.0) || !std::isfinite(theta_star)) {
    fail(ErrorCode::kInvalidArgument, "oracle: theta_star must be finite and >= 0");
  }
  if (beta.kind() == AttackProbability::Kind::kIndicatorHalfspace && beta.v().dim() != w_star.dim()) {
    fail(ErrorCode::kDimensionMismatch, "oracle: beta halfspace normal has wrong dimension");
  }
  if (perturbation == PerturbationKind::kRealization) {
    w_adv.validate("oracle w_adv");
    if (w_adv.dim() != w_star.dim()) fail(ErrorCode::kDimensionMismatch, "oracle: w_adv dimension differs from w_star");
  }
}

OracleReply query(const OracleConfig& cfg, const RealVector& x, Rng& rng) {
  if (x.dim() != cfg.w_star.dim()) {
    fail(ErrorCode::kDimensionMismatch, "oracle query: x has dimension " + std::to_string(x.dim()) + ", expected " +
                                            std::to_string(cfg.w_star.dim()));
  }
  const double clean = relu(dot(cfg.w_star, x));
  // Two draws per query regardless of outcome keeps streams aligned.
  const double coin = uniform01(rng);
  const double u = uniform01(rng);
  OracleReply r;
  r.attacked = coin < cfg.beta(x);
  if (!r.attacked) {
    r.y = clean;
    return r;
  }
  switch (cfg.perturbation) {
    case PerturbationKind::kUniform:
      r.xi = cfg.theta_star * (2.0 * u - 1.0);
      r.y = clean + r.xi;
      break;
    case PerturbationKind::kSignedMax:
      r.xi = u < 0.5 ? cfg.theta_star : -cfg.theta_star;
      r.y = clean + r.xi;
      break;
    case PerturbationKind::kRealization: {
      r.y = relu(dot(cfg.w_adv, x));
      r.xi = r.y - clean;
      if (std::abs(r.xi) > cfg.theta_star * (1.0 + 1e-12)) {
        fail(ErrorCode::kHypothesis, "realization attack: |xi| = " + std::to_string(std::abs(r.xi)) +
                                         " exceeds theta_star = " + std::to_string(cfg.theta_star) +
                                         " (x outside the declared support radius)");
      }
      break;
    }
  }
  return r;
}

OracleConfig make_realization_attack(const RealVector& w_star, const RealVector& w_adv, double r) {
  w_star.validate("realization w_star");
  w_adv.validate("realization w_adv");
  if (w_star.dim() != w_adv.dim()) fail(ErrorCode::kDimensionMismatch, "realization: w_star and w_adv dimensions differ");
  if (!(r >= 0.0) || !std::isfinite(r)) fail(ErrorCode::kInvalidArgument, "realization: support radius must be >= 0");
  OracleConfig cfg;
  cfg.w_star = w_star;
  cfg.w_adv = w_adv;
  cfg.support_radius = r;
  cfg.beta = AttackProbability::constant(1.0);
  cfg.perturbation = PerturbationKind::kRealization;
  cfg.theta_star = r * norm(w_adv - w_star);
  return cfg;
}

}  // namespace tt
