// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "trontrain/data_model.hpp"
#include "trontrain/rng.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

// f_w(x) = (1/width) sum_k leaky_relu(wᵀ A_k x, alpha). Patches are r x n.
struct NetClass {
  double alpha = 0.0;
  std::vector<RealMatrix> patches;

  std::size_t width() const noexcept { return patches.size(); }
  std::size_t r() const noexcept { return patches.empty() ? 0 : patches.front().rows(); }
  std::size_t n() const noexcept { return patches.empty() ? 0 : patches.front().cols(); }
  void validate() const;

  RealMatrix mean_patch() const;     // Abar
  double mean_patch_norm() const;    // (1/w) sum ||A_k||
  double mean_patch_sq_norm() const; // (1/w) sum ||A_k||^2
};

double net_forward(const NetClass& nc, const RealVector& w, const RealVector& x);

struct Consistency {
  bool consistent = false;
  double lambda_min_value = 0.0;
};

// lambda_min of sym(Abar P Mᵀ) and its positivity.
Consistency consistency_check(const NetClass& nc, const RealMatrix& P, const RealMatrix& M);

// {M - kC, ..., M - C, M + C, ..., M + kC}; Abar == M.
NetClass sample_net_class(const RealMatrix& M, const RealMatrix& C, std::size_t half_width, double alpha = 0.0);

// Wishart(I, dof) r x r block padded with zero columns to r x n.
RealMatrix sample_full_rank_M(std::size_t r, std::size_t n, std::size_t wishart_dof, Rng& rng);

struct NeuroTronTrace {
  std::vector<RealVector> iterates;         // w_1, ..., one per update
  std::vector<double> grad_norm;            // ||g_t|| per update
  std::vector<double> inf_norm_residual;    // max_i |y_i - f_{w_t}(x_i)| per iterate
  bool early_stopped = false;               // ||g_t|| < 1e-14
  double lambda1 = 0.0;                     // lambda_min(Abar Sigma Mᵀ)
};

inline constexpr double kGradStopThreshold = 1e-14;

// g_t = M (1/S) sum (y_i - f_{w_t}(x_i)) x_i; w_{t+1} = w_t + eta g_t.
// Requires a symmetric input multiset and (Sigma, M) consistency.
NeuroTronTrace neurotron_run(const Dataset& d, const NetClass& nc, const RealMatrix& M, double eta,
                             std::size_t max_iters, const RealVector& w_init);

// One update direction, without hypothesis checks.
RealVector neurotron_direction(const Dataset& d, const NetClass& nc, const RealMatrix& M, const RealVector& w);

// max_i |y_i - f_w(x_i)|.
double interpolation_error(const Dataset& d, const NetClass& nc, const RealVector& w);

struct Lemma2Check {
  double lhs = 0.0;  // ||w_{t+1} - w||^2 - ||w_t - w||^2
  double rhs = 0.0;
  bool holds = false;
};

// beta is computed exactly at w_ref; Ltilde is evaluated exactly.
std::vector<Lemma2Check> lemma2_check_detailed(const NeuroTronTrace& trace, const Dataset& d, const NetClass& nc,
                                               const RealMatrix& M, const RealVector& w_ref, double eta);
std::vector<bool> lemma2_check(const NeuroTronTrace& trace, const Dataset& d, const NetClass& nc,
                               const RealMatrix& M, const RealVector& w_ref, double eta);

// (1/S) sum (f_w(x_i) - f_{w_t}(x_i))^2.
double neuro_effective_erm(const Dataset& d, const NetClass& nc, const RealVector& w, const RealVector& w_t);

// Symmetry identity pair: lhs = sum_i sigma(<Aᵀz1, x_i>) <M x_i, z2>,
// rhs = S (1+alpha)/2 z1ᵀ A Sigma Mᵀ z2.
std::pair<double, double> lemma4_sides(const Dataset& d, const RealMatrix& A, const RealMatrix& M,
                                       const RealVector& z1, const RealVector& z2, double alpha);

struct NeuroTronSchedule {
  RealMatrix M;
  double lambda1 = 0.0, B = 0.0, M_norm = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
  double theta = 0.0, mu = 0.0, gamma = 0.0, gamma_lower = 0.0;
  double eta = 0.0, alpha_rate = 0.0;
  double b1 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;  // additive-noise mapping, theta > 0
  double predicted_floor = 0.0;
  double gamma_star_remark = 0.0;  // closed-form gamma* variant, recorded only
  double floor_displayed = 0.0;    // closed-form floor variant, recorded only
  double eps = 0.0, w_err0 = 0.0;
  std::int64_t predicted_T = 1;
};

// gamma <= 0 selects twice the lower bound. mu is ignored when theta == 0.
NeuroTronSchedule theorem5_schedule(const NetClass& nc, const RealMatrix& M, double B, double lambda1, double theta,
                                    double mu, double gamma, double w_err0, double eps);

// Empirical mean of -y u + (u^2/2) 1{u > 0}, u = (A1ᵀ w)ᵀ x.
double surrogate_risk(const Dataset& d, const RealMatrix& A1, const RealVector& w);

// CSV: t,w0..w{r-1},grad_norm,inf_norm_residual. grad_norm is empty on the
// last row when the run did not early-stop there.
void write_neuro_trace_csv(const NeuroTronTrace& trace, std::ostream& out);

}  // namespace tt
