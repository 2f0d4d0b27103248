// SPDX-License-Identifier: Apache-2.0
#include "trontrain/neurotron.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trontrain/error.hpp"
#include "trontrain/recursion_bounds.hpp"

namespace tt {

void NetClass::validate() const {
  if (patches.empty()) fail(ErrorCode::kInvalidArgument, "net class: width must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail(ErrorCode::kInvalidArgument, "net class: alpha must be >= 0");
  for (const auto& A : patches) {
    if (A.rows() != r() || A.cols() != n()) fail(ErrorCode::kDimensionMismatch, "net class: patch shapes differ");
    A.validate("net class patch");
  }
}

RealMatrix NetClass::mean_patch() const {
  RealMatrix s(r(), n());
  for (const auto& A : patches) s += A;
  s *= 1.0 / static_cast<double>(width());
  return s;
}

double NetClass::mean_patch_norm() const {
  double s = 0.0;
  for (const auto& A : patches) s += spectral_norm(A);
  return s / static_cast<double>(width());
}

double NetClass::mean_patch_sq_norm() const {
  double s = 0.0;
  for (const auto& A : patches) {
    const double v = spectral_norm(A);
    s += v * v;
  }
  return s / static_cast<double>(width());
}

double net_forward(const NetClass& nc, const RealVector& w, const RealVector& x) {
  if (w.dim() != nc.r() || x.dim() != nc.n()) {
    fail(ErrorCode::kDimensionMismatch, "net_forward: need w in R^" + std::to_string(nc.r()) + " and x in R^" +
                                            std::to_string(nc.n()));
  }
  double s = 0.0;
  for (const auto& A : nc.patches) s += leaky_relu(dot(w, matvec(A, x)), nc.alpha);
  return s / static_cast<double>(nc.width());
}

Consistency consistency_check(const NetClass& nc, const RealMatrix& P, const RealMatrix& M) {
  nc.validate();
  if (!P.square() || P.rows() != nc.n()) fail(ErrorCode::kDimensionMismatch, "consistency_check: P must be n x n");
  if (M.rows() != nc.r() || M.cols() != nc.n()) fail(ErrorCode::kDimensionMismatch, "consistency_check: M must be r x n");
  const RealMatrix prod = matmul(matmul(nc.mean_patch(), P), M.transpose());
  Consistency c;
  c.lambda_min_value = lambda_min_symmetric(prod);
  c.consistent = c.lambda_min_value > 0.0;
  return c;
}

NetClass sample_net_class(const RealMatrix& M, const RealMatrix& C, std::size_t half_width, double alpha) {
  if (M.rows() != C.rows() || M.cols() != C.cols()) fail(ErrorCode::kDimensionMismatch, "sample_net_class: M and C shapes differ");
  if (half_width < 1) fail(ErrorCode::kInvalidArgument, "sample_net_class: half width must be >= 1");
  NetClass nc;
  nc.alpha = alpha;
  const long k = static_cast<long>(half_width);
  for (long j = -k; j <= k; ++j) {
    if (j == 0) continue;
    nc.patches.push_back(M + static_cast<double>(j) * C);
  }
  nc.validate();
  return nc;
}

RealMatrix sample_full_rank_M(std::size_t r, std::size_t n, std::size_t wishart_dof, Rng& rng) {
  if (r < 1 || r > n) fail(ErrorCode::kInvalidArgument, "sample_full_rank_M: need 1 <= r <= n");
  if (wishart_dof < r) fail(ErrorCode::kInvalidArgument, "sample_full_rank_M: Wishart dof must be >= r");
  for (int attempt = 0; attempt < 3; ++attempt) {
    RealMatrix M(r, n);
    for (std::size_t k = 0; k < wishart_dof; ++k) {
      RealVector g(r);
      for (std::size_t i = 0; i < r; ++i) g[i] = standard_normal(rng);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) M(i, j) += g[i] * g[j];
    }
    if (smallest_singular_value(M) > 1e-10) return M;
  }
  fail(ErrorCode::kNumeric, "sample_full_rank_M: rank-deficient after 3 attempts");
}

RealVector neurotron_direction(const Dataset& d, const NetClass& nc, const RealMatrix& M, const RealVector& w) {
  RealVector acc(d.dim());
  for (const auto& s : d.samples()) axpy(s.y - net_forward(nc, w, s.x), s.x, acc);
  acc *= 1.0 / static_cast<double>(d.size());
  return matvec(M, acc);
}

double interpolation_error(const Dataset& d, const NetClass& nc, const RealVector& w) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "interpolation_error: empty dataset");
  double m = 0.0;
  for (const auto& s : d.samples()) m = std::max(m, std::abs(s.y - net_forward(nc, w, s.x)));
  return m;
}

namespace {

double require_consistent(const Dataset& d, const NetClass& nc, const RealMatrix& M) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "neurotron: empty dataset");
  if (d.dim() != nc.n()) fail(ErrorCode::kDimensionMismatch, "neurotron: data dimension differs from patch columns");
  if (!is_symmetric(d)) {
    fail(ErrorCode::kHypothesis, "neurotron: input multiset is not symmetric (need count(x) == count(-x)); use symmetrize");
  }
  const Consistency c = consistency_check(nc, empirical_covariance(d), M);
  if (!c.consistent) {
    fail(ErrorCode::kHypothesis, "neurotron: consistency lambda_min(Abar Sigma Mᵀ) > 0 violated (value " +
                                     std::to_string(c.lambda_min_value) + ")");
  }
  return c.lambda_min_value;
}

}  // namespace

NeuroTronTrace neurotron_run(const Dataset& d, const NetClass& nc, const RealMatrix& M, double eta,
                             std::size_t max_iters, const RealVector& w_init) {
  NeuroTronTrace tr;
  tr.lambda1 = require_consistent(d, nc, M);
  if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::kInvalidArgument, "neurotron: eta must be > 0");
  w_init.validate("neurotron w_init");
  if (w_init.dim() != nc.r()) fail(ErrorCode::kDimensionMismatch, "neurotron: w_init must be in R^r");
  RealVector w = w_init;
  tr.iterates.push_back(w);
  tr.inf_norm_residual.push_back(interpolation_error(d, nc, w));
  for (std::size_t t = 0; t < max_iters; ++t) {
    const RealVector g = neurotron_direction(d, nc, M, w);
    const double gn = norm(g);
    tr.grad_norm.push_back(gn);
    if (gn < kGradStopThreshold) {
      tr.early_stopped = true;
      break;
    }
    axpy(eta, g, w);
    tr.iterates.push_back(w);
    tr.inf_norm_residual.push_back(interpolation_error(d, nc, w));
  }
  return tr;
}

double neuro_effective_erm(const Dataset& d, const NetClass& nc, const RealVector& w, const RealVector& w_t) {
  double s = 0.0;
  for (const auto& smp : d.samples()) {
    const double r = net_forward(nc, w, smp.x) - net_forward(nc, w_t, smp.x);
    s += r * r;
  }
  return s / static_cast<double>(d.size());
}

std::vector<Lemma2Check> lemma2_check_detailed(const NeuroTronTrace& trace, const Dataset& d, const NetClass& nc,
                                               const RealMatrix& M, const RealVector& w_ref, double eta) {
  const double lambda1 = require_consistent(d, nc, M);
  const double B = radius(d);
  const double Mn = spectral_norm(M);
  const double Abar = nc.mean_patch_norm();
  const double a = nc.alpha;
  RealVector res(d.dim());
  for (const auto& s : d.samples()) axpy(s.y - net_forward(nc, w_ref, s.x), s.x, res);
  res *= 1.0 / static_cast<double>(d.size());
  const double beta = norm(matvec(M, res));

  std::vector<Lemma2Check> out;
  for (std::size_t t = 0; t + 1 < trace.iterates.size(); ++t) {
    const RealVector& wt = trace.iterates[t];
    const double dt = norm(wt - w_ref);
    const double Lt = neuro_effective_erm(d, nc, w_ref, wt);
    Lemma2Check c;
    c.lhs = squared_distance(trace.iterates[t + 1], w_ref) - dt * dt;
    c.rhs = 2.0 * eta * beta * dt - eta * (1.0 + a) * lambda1 * dt * dt +
            eta * eta * (beta * beta + beta * (1.0 + a) * B * B * dt * Mn * Abar + B * B * Mn * Mn * Lt);
    c.holds = c.lhs - c.rhs <= 1e-9;
    out.push_back(c);
  }
  return out;
}

std::vector<bool> lemma2_check(const NeuroTronTrace& trace, const Dataset& d, const NetClass& nc,
                               const RealMatrix& M, const RealVector& w_ref, double eta) {
  std::vector<bool> out;
  for (const auto& c : lemma2_check_detailed(trace, d, nc, M, w_ref, eta)) out.push_back(c.holds);
  return out;
}

std::pair<double, double> lemma4_sides(const Dataset& d, const RealMatrix& A, const RealMatrix& M,
                                       const RealVector& z1, const RealVector& z2, double alpha) {
  const RealVector Az1 = matvec_transposed(A, z1);
  const RealVector Mz2 = matvec_transposed(M, z2);
  double lhs = 0.0;
  for (const auto& s : d.samples()) lhs += leaky_relu(dot(Az1, s.x), alpha) * dot(Mz2, s.x);
  const RealMatrix core = matmul(matmul(A, empirical_covariance(d)), M.transpose());
  const double rhs = static_cast<double>(d.size()) * (1.0 + alpha) / 2.0 * dot(z1, matvec(core, z2));
  return {lhs, rhs};
}

NeuroTronSchedule theorem5_schedule(const NetClass& nc, const RealMatrix& M, double B, double lambda1, double theta,
                                    double mu, double gamma, double w_err0, double eps) {
  nc.validate();
  for (double v : {B, lambda1, theta, w_err0, eps}) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "theorem5_schedule: non-finite parameter");
  }
  if (!(lambda1 > 0.0)) fail(ErrorCode::kHypothesis, "theorem5_schedule: consistency lambda1 > 0 violated");
  if (!(B > 0.0)) fail(ErrorCode::kInvalidArgument, "theorem5_schedule: data radius B must be > 0");
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "theorem5_schedule: eps must be > 0");
  if (!(theta >= 0.0)) fail(ErrorCode::kInvalidArgument, "theorem5_schedule: theta must be >= 0");
  if (!(w_err0 > 0.0)) fail(ErrorCode::kInvalidArgument, "theorem5_schedule: ||w_1 - w||^2 must be > 0");
  if (eps * eps >= w_err0) fail(ErrorCode::kAlreadyConverged, "theorem5_schedule: already converged (eps^2 >= ||w_1 - w||^2)");

  NeuroTronSchedule s;
  s.M = M;
  s.lambda1 = lambda1;
  s.B = B;
  s.theta = theta;
  s.eps = eps;
  s.w_err0 = w_err0;
  s.M_norm = spectral_norm(M);
  const double a = nc.alpha;
  const double Mn = s.M_norm;
  const double Abar = nc.mean_patch_norm();
  const double Abar2 = nc.mean_patch_sq_norm();
  s.a1 = (1.0 + a) * lambda1;
  s.a2 = B * B * B * B * Mn * Mn * (1.0 + a) * (1.0 + a) * Abar2;
  s.a3 = B * B * B * Mn * Mn * (1.0 + a) * Abar;
  s.a4 = 2.0 * B * Mn;
  s.a5 = B * B * Mn * Mn;

  if (theta == 0.0) {
    // (1+delta0) plays the role of gamma: eta = a1/(gamma a2).
    s.gamma_lower = std::max(1.0, s.a1 * s.a1 / s.a2);
    s.gamma = gamma > 0.0 ? gamma : 2.0 * s.gamma_lower;
    if (!(s.gamma > s.gamma_lower)) {
      fail(ErrorCode::kHypothesis, "theorem5_schedule: gamma > max{1, a1^2/a2} violated (gamma = " +
                                       std::to_string(s.gamma) + ", bound " + std::to_string(s.gamma_lower) + ")");
    }
    RecursionParams p;
    p.b1 = s.a1;
    p.c1 = s.a2;
    p.C = w_err0;
    p.eps_prime_sq = eps * eps;
    p.delta0 = s.gamma - 1.0;
    const RecursionBound rb = recurse_case1(p);
    s.eta = rb.eta_prime;
    s.alpha_rate = rb.alpha;
    s.predicted_T = rb.predicted_T;
    s.b1 = s.a1;
    s.c1 = s.a2;
    return s;
  }

  const double mu_sq_min = B * Mn / ((1.0 + a) * lambda1);
  if (!(mu > 0.0) || !(mu * mu > mu_sq_min)) {
    fail(ErrorCode::kHypothesis, "theorem5_schedule: mu > sqrt(B||M||/((1+alpha) lambda1)) = " +
                                     std::to_string(std::sqrt(mu_sq_min)) + " violated (mu = " + std::to_string(mu) + ")");
  }
  s.mu = mu;
  const double mu2 = mu * mu;
  const double th2 = theta * theta;
  s.b1 = s.a1 - s.a4 / (2.0 * mu2);
  s.c1 = s.a2 + s.a3 / (2.0 * mu2);
  s.c2 = (s.a3 * mu2 / 2.0 + s.a5) * th2;
  s.c3 = s.a4 * th2 * mu2 / 2.0;
  const double eps_min_sq = s.c3 / s.b1;
  if (!(eps * eps > eps_min_sq)) {
    fail(ErrorCode::kHypothesis, "theorem5_schedule: eps^2 > theta^2 mu^2/((1+alpha) lambda1/(B||M||) - 1/mu^2) = " +
                                     std::to_string(eps_min_sq) + " violated");
  }
  s.gamma_lower = std::max(1.0, lemma6_gamma_lower_bound(s.b1, s.c1, s.c2, s.c3, eps * eps));
  s.gamma = gamma > 0.0 ? gamma : 2.0 * s.gamma_lower;
  RecursionParams p;
  p.b1 = s.b1;
  p.c1 = s.c1;
  p.c2 = s.c2;
  p.c3 = s.c3;
  p.C = w_err0;
  p.eps_prime_sq = eps * eps;
  p.gamma = s.gamma;
  const RecursionBound rb = recurse2(p);
  s.eta = rb.eta_prime;
  s.alpha_rate = rb.alpha;
  s.predicted_floor = rb.floor;
  s.predicted_T = rb.predicted_T;

  // Closed-form variants, kept for comparison with the mapping above.
  const double k1 = (1.0 + a) * mu2 * lambda1 - B * Mn;
  const double x_term = (2.0 + mu2 * (1.0 + a) * Abar) /
                        (2.0 * mu2 * ((1.0 + a) * B * Mn) * ((1.0 + a) * B * Mn) * Abar2 + (1.0 + a) * B * Abar);
  const double y_term = mu2 * B * Mn / k1;
  const double first = 2.0 * k1 * k1 / ((1.0 + a) * mu2 * B * B * B * Mn * Mn * (Abar + 2.0 * mu2 * (1.0 + a) * B * Abar2));
  const double e2 = eps * eps;
  const double second = e2 > y_term ? (e2 + x_term) / (e2 - y_term) : INFINITY;
  s.gamma_star_remark = std::max(first, second);
  s.floor_displayed = mu2 * th2 / (s.gamma - 1.0) * (x_term + s.gamma * y_term);
  return s;
}

double surrogate_risk(const Dataset& d, const RealMatrix& A1, const RealVector& w) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "surrogate_risk: empty dataset");
  if (A1.rows() != w.dim() || A1.cols() != d.dim()) fail(ErrorCode::kDimensionMismatch, "surrogate_risk: shape mismatch");
  const RealVector v = matvec_transposed(A1, w);
  double s = 0.0;
  for (const auto& smp : d.samples()) {
    const double u = dot(v, smp.x);
    s += -smp.y * u + (u > 0.0 ? 0.5 * u * u : 0.0);
  }
  return s / static_cast<double>(d.size());
}

void write_neuro_trace_csv(const NeuroTronTrace& trace, std::ostream& out) {
  const std::size_t r = trace.iterates.empty() ? 0 : trace.iterates.front().dim();
  out << 't';
  for (std::size_t i = 0; i < r; ++i) out << ",w" << i;
  out << ",grad_norm,inf_norm_residual\n";
  for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
    out << (t + 1);
    for (std::size_t i = 0; i < r; ++i) out << ',' << format_real(trace.iterates[t][i]);
    out << ',' << (t < trace.grad_norm.size() ? format_real(trace.grad_norm[t]) : "") << ','
        << format_real(trace.inf_norm_residual[t]) << '\n';
  }
}

}  // namespace tt
