// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trontrain/adversary.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/recursion_bounds.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

struct ReluTronConfig {
  std::size_t batch = 1;
  double eta = 0.0;
  std::size_t max_iters = 0;  // 0: run schedule.predicted_T updates
  RealVector w_init;

  void validate() const;
};

enum class TheoremCase { kI, kII };

struct CaseConstants {
  TheoremCase which = TheoremCase::kI;
  std::size_t batch = 1;
  double b1p = 0.0, c1p = 0.0, c2p = 0.0, c3p = 0.0;
  double c2p_stated = 0.0;  // 1/beta1 prefactor variant; recorded, not used
  double c2 = 0.0, c3 = 0.0;  // theta*^2 c2p, theta*^2 c3p fed to the recursion
  double gamma = 0.0;
  double K = 0.0;
  double delta0 = 0.0;
  double eta = 0.0;
  double alpha_rate = 0.0;
  double predicted_floor = 0.0;
  std::int64_t predicted_T = 1;
  double eps = 0.0, delta = 0.0;
  double w_err0 = 0.0;
  double target = 0.0;  // eps^2 delta
  RecursionBound bound;
};

// Case I: b1 = 2 lambda1, c1 = (a4 + a2^2 (b-1))/b, eta = b1/(c1 (1+delta0)).
CaseConstants case1_schedule(const MomentEstimates& m, std::size_t b, double delta0, double w_err0, double eps,
                             double delta);

// Case II. K <= 0 selects 2/lambda1; gamma <= 0 selects twice the lower bound.
CaseConstants case2_schedule(const MomentEstimates& m, std::size_t b, double K, double gamma, double w_err0,
                             double eps, double delta);

// Closed form of the Case I contraction factor; decreasing in b.
double case1_alpha_closed_form(const MomentEstimates& m, std::size_t b, double delta0);

using OracleSample = std::pair<RealVector, OracleReply>;

// g = -(1/b) sum 1{y > theta*} (y - wᵀx) x.
RealVector relu_tron_gradient(const RealVector& w_t, const std::vector<OracleSample>& batch, double theta_star);
// w_t - eta g.
RealVector relu_tron_step(const RealVector& w_t, const std::vector<OracleSample>& batch, double theta_star, double eta);

struct TrainOptions {
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::optional<RealVector> reference;  // distance target; defaults to w*
  double success_threshold = -1.0;      // < 0 selects eps^2 of the schedule
  bool keep_traces = true;
};

struct TrainReport {
  std::size_t steps = 0;            // updates per repeat
  std::vector<double> final_sq_err; // per repeat, ||w_T - ref||^2
  double success_threshold = 0.0;
  double success_rate = 0.0;
  std::vector<double> mean_trajectory;    // X_t averaged over repeats, t = 1..steps+1
  std::vector<double> stderr_trajectory;  // standard error of the mean
  std::vector<std::vector<double>> traces;  // per repeat sq_err, when kept
  std::vector<RealVector> final_iterates;
};

// Fresh i.i.d. batches each step; repeat r uses RNG stream r.
TrainReport relu_tron_train(const InputDistribution& dist, const OracleConfig& oracle, const ReluTronConfig& cfg,
                            const CaseConstants& schedule, const TrainOptions& opts);

struct Term1Check {
  double mean = 0.0;     // MC estimate of E[<w - w*, g> | w]
  double std_err = 0.0;
  double bound = 0.0;    // lambda1 ||d||^2 - theta* beta1 ||d||
  bool holds = false;    // mean >= bound - 3 std_err
};

// Single-sample conditional expectation at a fixed iterate.
Term1Check term1_check(const InputDistribution& dist, const OracleConfig& oracle, const RealVector& w_t,
                       const MomentEstimates& m, std::size_t samples, std::uint64_t seed);

// CSV "t,sq_err" with t starting at 1.
void write_sq_err_trace_csv(const std::vector<double>& trace, std::ostream& out);

std::string case_name(TheoremCase c);

}  // namespace tt
