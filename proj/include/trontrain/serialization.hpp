// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "trontrain/config.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/neurotron.hpp"
#include "trontrain/recursion_bounds.hpp"
#include "trontrain/relu_tron.hpp"

namespace tt {

using Json = nlohmann::json;

Json to_json(const RealVector& v);
Json to_json(const RealMatrix& m);
RealVector vector_from_json(const Json& j);
RealMatrix matrix_from_json(const Json& j);

// Exactly a1..a4, beta1..beta3, lambda1_theta, theta_star, n_samples.
Json moments_to_json(const MomentEstimates& m);
MomentEstimates moments_from_json(const Json& j);
Json moments_std_err_to_json(const MomentEstimates& m);

// beta restricted to named built-ins; custom beta is rejected.
Json oracle_to_json(const OracleConfig& o);
OracleConfig oracle_from_json(const Json& j);

// {width, alpha, patches}.
Json net_class_to_json(const NetClass& nc);
NetClass net_class_from_json(const Json& j);

Json case_constants_to_json(const CaseConstants& c);
Json recursion_bound_to_json(const RecursionBound& b);
Json neuro_schedule_to_json(const NeuroTronSchedule& s);
Json config_to_json(const ExperimentConfig& c);

}  // namespace tt
