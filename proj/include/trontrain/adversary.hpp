// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "trontrain/distributions.hpp"
#include "trontrain/rng.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

enum class PerturbationKind { kUniform, kSignedMax, kRealization };

std::string perturbation_name(PerturbationKind k);
PerturbationKind parse_perturbation(const std::string& name);

// Label oracle. Replies satisfy |y - relu(w*ᵀx)| <= theta_star.
struct OracleConfig {
  RealVector w_star;
  double theta_star = 0.0;
  AttackProbability beta = AttackProbability::constant(0.0);
  PerturbationKind perturbation = PerturbationKind::kUniform;
  RealVector w_adv;             // kRealization only
  double support_radius = 0.0;  // kRealization only; r >= sup ||x||

  void validate() const;
};

struct OracleReply {
  double y = 0.0;
  bool attacked = false;
  double xi = 0.0;  // 0 when not attacked
};

// Exactly two uniforms per query (coin, then magnitude), so the RNG advances
// identically for every strategy and every beta.
OracleReply query(const OracleConfig& cfg, const RealVector& x, Rng& rng);

// beta == 1, theta_star = r ||w_adv - w*||, replies equal relu(w_advᵀx).
OracleConfig make_realization_attack(const RealVector& w_star, const RealVector& w_adv, double r);

}  // namespace tt
