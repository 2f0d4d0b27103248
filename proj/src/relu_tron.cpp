// SPDX-License-Identifier: Apache-2.0
#include "trontrain/relu_tron.hpp"

#include <cmath>
#include <ostream>

#include "trontrain/data_model.hpp"
#include "trontrain/error.hpp"
#include "trontrain/parallel.hpp"

namespace tt {

std::string case_name(TheoremCase c) { return c == TheoremCase::kI ? "I" : "II"; }

void ReluTronConfig::validate() const {
  if (batch < 1) fail(ErrorCode::kInvalidArgument, "relu_tron: batch size must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::kInvalidArgument, "relu_tron: eta must be > 0");
  w_init.validate("relu_tron w_init");
}

namespace {

void check_common(const MomentEstimates& m, std::size_t b, double w_err0, double eps, double delta) {
  if (b < 1) fail(ErrorCode::kInvalidArgument, "schedule: batch size must be >= 1");
  if (!(eps > 0.0) || !(delta > 0.0 && delta <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "schedule: need eps > 0 and delta in (0, 1]");
  }
  if (!(w_err0 > 0.0) || !std::isfinite(w_err0)) fail(ErrorCode::kInvalidArgument, "schedule: ||w_1 - w*||^2 must be > 0");
  if (!(m.lambda1_theta > 0.0)) {
    fail(ErrorCode::kHypothesis, "schedule: lambda1(theta*) = " + std::to_string(m.lambda1_theta) + " must be > 0");
  }
  if (eps * eps * delta >= w_err0) {
    fail(ErrorCode::kAlreadyConverged, "schedule: already converged (eps^2 delta >= ||w_1 - w*||^2)");
  }
}

double c1_case1(const MomentEstimates& m, double b) { return (m.a4 + m.a2 * m.a2 * (b - 1.0)) / b; }

}  // namespace

double case1_alpha_closed_form(const MomentEstimates& m, std::size_t b, double delta0) {
  const double bb = static_cast<double>(b);
  const double l = m.lambda1_theta;
  return 1.0 - 4.0 * l * l * delta0 / ((m.a2 * m.a2 + (m.a4 - m.a2 * m.a2) / bb) * (1.0 + delta0) * (1.0 + delta0));
}

CaseConstants case1_schedule(const MomentEstimates& m, std::size_t b, double delta0, double w_err0, double eps,
                             double delta) {
  check_common(m, b, w_err0, eps, delta);
  const double bb = static_cast<double>(b);
  CaseConstants c;
  c.which = TheoremCase::kI;
  c.batch = b;
  c.delta0 = delta0;
  c.eps = eps;
  c.delta = delta;
  c.w_err0 = w_err0;
  c.target = eps * eps * delta;
  c.b1p = 2.0 * m.lambda1_theta;
  c.c1p = c1_case1(m, bb);
  RecursionParams p;
  p.b1 = c.b1p;
  p.c1 = c.c1p;
  p.C = w_err0;
  p.eps_prime_sq = c.target;
  p.delta0 = delta0;
  c.bound = recurse_case1(p);
  c.eta = c.bound.eta_prime;
  c.alpha_rate = c.bound.alpha;
  c.predicted_T = c.bound.predicted_T;
  c.predicted_floor = 0.0;
  return c;
}

CaseConstants case2_schedule(const MomentEstimates& m, std::size_t b, double K, double gamma, double w_err0,
                             double eps, double delta) {
  check_common(m, b, w_err0, eps, delta);
  const double bb = static_cast<double>(b);
  const double l = m.lambda1_theta;
  CaseConstants c;
  c.which = TheoremCase::kII;
  c.batch = b;
  c.eps = eps;
  c.delta = delta;
  c.w_err0 = w_err0;
  c.target = eps * eps * delta;
  c.K = K > 0.0 ? K : 2.0 / l;
  c.b1p = 2.0 * l - 1.0 / c.K;
  if (!(c.b1p > 0.0)) {
    fail(ErrorCode::kHypothesis, "case2_schedule: 2 lambda1(theta*) - 1/K > 0 violated (K too small)");
  }
  c.c1p = (1.0 + m.a4 + (1.0 + m.a2 * m.a2) * (bb - 1.0)) / bb;
  const double bracket = m.beta3 * m.beta3 + (m.beta2 * m.a1) * (m.beta2 * m.a1) * (bb - 1.0) + m.beta2 +
                         (bb - 1.0) * m.beta1 * m.beta1;
  c.c2p = bracket / bb;
  c.c2p_stated = m.beta1 > 0.0 ? bracket / m.beta1 : INFINITY;
  c.c3p = c.K * m.beta1 * m.beta1;
  const double th2 = m.theta_star * m.theta_star;
  c.c2 = th2 * c.c2p;
  c.c3 = th2 * c.c3p;

  const double floor_min = c.c3 / c.b1p;
  if (!(c.target > floor_min)) {
    fail(ErrorCode::kTargetBelowFloor, "case2_schedule: target below noise floor (eps^2 delta = " +
                                           std::to_string(c.target) + " <= c3/b1 = " + std::to_string(floor_min) + ")");
  }
  const double lb = std::max(1.0, lemma6_gamma_lower_bound(c.b1p, c.c1p, c.c2, c.c3, c.target));
  if (gamma > 0.0) {
    if (!(gamma > lb)) {
      fail(ErrorCode::kHypothesis, "case2_schedule: gamma = " + std::to_string(gamma) +
                                       " violates gamma > max{b1'^2/c1', (eps^2 delta + c2/c1)/(eps^2 delta - c3/b1)} = " +
                                       std::to_string(lb));
    }
    c.gamma = gamma;
  } else {
    c.gamma = 2.0 * lb;
  }
  RecursionParams p;
  p.b1 = c.b1p;
  p.c1 = c.c1p;
  p.c2 = c.c2;
  p.c3 = c.c3;
  p.C = w_err0;
  p.eps_prime_sq = c.target;
  p.gamma = c.gamma;
  c.bound = (c.c2 > 0.0 && c.c3 > 0.0) ? recurse2(p) : recurse2_allow_noiseless(p);
  c.eta = c.bound.eta_prime;
  c.alpha_rate = c.bound.alpha;
  c.predicted_floor = c.bound.floor;
  c.predicted_T = c.bound.predicted_T;
  return c;
}

RealVector relu_tron_gradient(const RealVector& w_t, const std::vector<OracleSample>& batch, double theta_star) {
  if (batch.empty()) fail(ErrorCode::kEmptyInput, "relu_tron_step: empty batch");
  RealVector g(w_t.dim());
  for (const auto& [x, reply] : batch) {
    if (x.dim() != w_t.dim()) fail(ErrorCode::kDimensionMismatch, "relu_tron_step: sample dimension differs from w_t");
    if (reply.y > theta_star) axpy(-(reply.y - dot(w_t, x)), x, g);
  }
  g *= 1.0 / static_cast<double>(batch.size());
  return g;
}

RealVector relu_tron_step(const RealVector& w_t, const std::vector<OracleSample>& batch, double theta_star,
                          double eta) {
  RealVector w = w_t;
  axpy(-eta, relu_tron_gradient(w_t, batch, theta_star), w);
  return w;
}

TrainReport relu_tron_train(const InputDistribution& dist, const OracleConfig& oracle, const ReluTronConfig& cfg,
                            const CaseConstants& schedule, const TrainOptions& opts) {
  cfg.validate();
  oracle.validate();
  const std::size_t n = dist.dim();
  if (cfg.w_init.dim() != n || oracle.w_star.dim() != n) {
    fail(ErrorCode::kDimensionMismatch, "relu_tron_train: w_init, w_star and distribution dimensions must agree");
  }
  if (opts.repeats < 1) fail(ErrorCode::kInvalidArgument, "relu_tron_train: repeats must be >= 1");
  const RealVector ref = opts.reference ? *opts.reference : oracle.w_star;
  if (ref.dim() != n) fail(ErrorCode::kDimensionMismatch, "relu_tron_train: reference dimension");

  TrainReport rep;
  rep.steps = cfg.max_iters > 0 ? cfg.max_iters : static_cast<std::size_t>(schedule.predicted_T);
  rep.success_threshold = opts.success_threshold >= 0.0 ? opts.success_threshold : schedule.eps * schedule.eps;
  std::vector<std::vector<double>> traces(opts.repeats);
  std::vector<RealVector> finals(opts.repeats);

  parallel_for(opts.repeats, [&](std::size_t r) {
    Rng rng = make_rng(opts.seed, r, 0x72656c75);
    RealVector w = cfg.w_init;
    auto& tr = traces[r];
    tr.reserve(rep.steps + 1);
    tr.push_back(squared_distance(w, ref));
    std::vector<OracleSample> batch(cfg.batch);
    for (std::size_t t = 0; t < rep.steps; ++t) {
      for (auto& s : batch) {
        s.first = dist.draw(rng);
        s.second = query(oracle, s.first, rng);
      }
      w = relu_tron_step(w, batch, oracle.theta_star, cfg.eta);
      tr.push_back(squared_distance(w, ref));
    }
    finals[r] = std::move(w);
  });

  const double R = static_cast<double>(opts.repeats);
  rep.mean_trajectory.assign(rep.steps + 1, 0.0);
  rep.stderr_trajectory.assign(rep.steps + 1, 0.0);
  std::size_t successes = 0;
  for (std::size_t r = 0; r < opts.repeats; ++r) {
    const double fin = traces[r].back();
    rep.final_sq_err.push_back(fin);
    if (fin <= rep.success_threshold) ++successes;
    for (std::size_t t = 0; t <= rep.steps; ++t) rep.mean_trajectory[t] += traces[r][t];
  }
  for (auto& v : rep.mean_trajectory) v /= R;
  if (opts.repeats > 1) {
    for (std::size_t t = 0; t <= rep.steps; ++t) {
      double ss = 0.0;
      for (std::size_t r = 0; r < opts.repeats; ++r) {
        const double dlt = traces[r][t] - rep.mean_trajectory[t];
        ss += dlt * dlt;
      }
      rep.stderr_trajectory[t] = std::sqrt(ss / (R - 1.0) / R);
    }
  }
  rep.success_rate = static_cast<double>(successes) / R;
  rep.final_iterates = std::move(finals);
  if (opts.keep_traces) rep.traces = std::move(traces);
  return rep;
}

Term1Check term1_check(const InputDistribution& dist, const OracleConfig& oracle, const RealVector& w_t,
                       const MomentEstimates& m, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) fail(ErrorCode::kInvalidArgument, "term1_check: need at least 2 samples");
  Rng rng = make_rng(seed, 0, 0x7465726d);
  const RealVector d = w_t - oracle.w_star;
  double s = 0.0, ss = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const RealVector x = dist.draw(rng);
    const OracleReply rep = query(oracle, x, rng);
    const double v = rep.y > oracle.theta_star ? -(rep.y - dot(w_t, x)) * dot(d, x) : 0.0;
    s += v;
    ss += v * v;
  }
  const double N = static_cast<double>(samples);
  Term1Check c;
  c.mean = s / N;
  c.std_err = std::sqrt(std::max(0.0, (ss - N * c.mean * c.mean) / (N - 1.0)) / N);
  const double dn = norm(d);
  c.bound = m.lambda1_theta * dn * dn - oracle.theta_star * m.beta1 * dn;
  c.holds = c.mean >= c.bound - 3.0 * c.std_err;
  return c;
}

void write_sq_err_trace_csv(const std::vector<double>& trace, std::ostream& out) {
  out << "t,sq_err\n";
  for (std::size_t t = 0; t < trace.size(); ++t) out << (t + 1) << ',' << format_real(trace[t]) << '\n';
}

}  // namespace tt
