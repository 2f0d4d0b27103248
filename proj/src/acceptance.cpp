// SPDX-License-Identifier: Apache-2.0
#include "trontrain/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "trontrain/adversary.hpp"
#include "trontrain/data_model.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/error.hpp"
#include "trontrain/experiment.hpp"
#include "trontrain/glm_tron.hpp"
#include "trontrain/neurotron.hpp"
#include "trontrain/parallel.hpp"
#include "trontrain/relu_tron.hpp"

namespace tt {

namespace {

using Detail = std::ostringstream;

// Every tolerance below is multiplied by this factor.
struct Ctx {
  std::uint64_t seed;
  double scale;
  double tol(double t) const { return t * scale; }
};

InputDistribution square() { return InputDistribution::uniform_cube(2, -1.0, 1.0); }
const RealVector& w_star_square() {
  static const RealVector w{-1.0, 1.0};
  return w;
}

// Least-squares slope of log(traj[t]) for t in [0, last].
double log_slope(const std::vector<double>& traj, std::size_t last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t t = 0; t <= last && t < traj.size(); ++t) {
    if (!(traj[t] > 0.0)) break;
    const double x = static_cast<double>(t), y = std::log(traj[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Last index whose value is still above `cut`.
std::size_t last_above(const std::vector<double>& traj, double cut) {
  std::size_t last = 0;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    if (traj[t] > cut) last = t;
    else break;
  }
  return last;
}

inline constexpr double kSlopeSlack = 0.05;

// ----------------------------------------------------------------- 1, 2

CriterionResult lambda_check(const std::string& id, const Ctx& c, const InputDistribution& dist, const RealVector& w,
                             double theta, double expected, double abs_tol) {
  const MomentEstimates m =
      estimate_moments(dist, w, theta, AttackProbability::constant(0.0), kAcceptanceMcSamples, c.seed);
  const double err = std::abs(m.lambda1_theta - expected);
  const double se = m.std_err.lambda1_theta;
  CriterionResult r{id, false, m.lambda1_theta, c.tol(abs_tol), ""};
  r.pass = err <= c.tol(3.0 * se) && err <= c.tol(abs_tol);
  Detail d;
  d << "theta*=" << theta << " expected=" << expected << " |err|=" << err << " se=" << se << " (need |err| <= 3se and <= "
    << abs_tol << ")";
  r.detail = d.str();
  return r;
}

CriterionResult crit_1a(const Ctx& c) { return lambda_check("1a", c, square(), w_star_square(), 0.0, 1.0 / 6.0, 0.005); }

CriterionResult crit_1b(const Ctx& c) {
  CriterionResult r = lambda_check("1b", c, square(), w_star_square(), 1.0, 1.0 / 96.0, 0.005);
  const MomentEstimates half = estimate_moments(square(), w_star_square(), 0.5, AttackProbability::constant(0.0),
                                                kAcceptanceMcSamples, c.seed);
  Detail d;
  d << r.detail << "; info: theta*=0.5 gives " << half.lambda1_theta << " (se " << half.std_err.lambda1_theta
    << ") vs 1/96=" << 1.0 / 96.0 << "; at theta*=1 the region -x1+x2>2 has measure zero";
  r.detail = d.str();
  return r;
}

CriterionResult crit_2(const Ctx& c) {
  return lambda_check("2", c, InputDistribution::isotropic_gaussian(1, 1.0), RealVector{1.0}, 0.0, 0.5, 0.005);
}

// ----------------------------------------------------------------- 3

struct Case1Setup {
  MomentEstimates m;
  CaseConstants s;
};

Case1Setup case1_setup(const Ctx& c, std::size_t b) {
  Case1Setup out;
  out.m = estimate_moments(square(), w_star_square(), 0.0, AttackProbability::constant(0.0), kAcceptanceMcSamples,
                           c.seed);
  out.s = case1_schedule(out.m, b, 1.0, squared_norm(w_star_square()), 1e-2, 0.1);
  return out;
}

OracleConfig clean_oracle() {
  OracleConfig o;
  o.w_star = w_star_square();
  return o;
}

CriterionResult crit_3(const Ctx& c) {
  const Case1Setup st = case1_setup(c, 8);
  ReluTronConfig rc;
  rc.batch = 8;
  rc.eta = st.s.eta;
  rc.w_init = RealVector(2);
  TrainOptions to;
  to.repeats = 50;
  to.seed = c.seed;
  const TrainReport rep = relu_tron_train(square(), clean_oracle(), rc, st.s, to);

  // Per-step contraction: mean over repeats of X_{t+1}/X_t against alpha + 3 se.
  const double alpha = st.s.alpha_rate;
  double worst_excess = -INFINITY;
  std::size_t worst_t = 0;
  for (std::size_t t = 0; t + 1 < rep.mean_trajectory.size(); ++t) {
    double s = 0, ss = 0;
    for (const auto& tr : rep.traces) {
      const double q = tr[t + 1] / tr[t];
      s += q;
      ss += q * q;
    }
    const double R = static_cast<double>(rep.traces.size());
    const double mean = s / R;
    const double se = std::sqrt(std::max(0.0, (ss - R * mean * mean) / (R - 1.0)) / R);
    const double excess = mean - (alpha + c.tol(3.0 * se));
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_t = t + 1;
    }
  }
  const double target = st.s.target;
  const double slope = log_slope(rep.mean_trajectory, last_above(rep.mean_trajectory, target));
  const bool rate_ok = rep.success_rate >= 0.9;
  const bool steps_ok = rep.steps <= 2 * static_cast<std::size_t>(st.s.predicted_T);
  const bool contraction_ok = worst_excess <= 0.0;
  const bool slope_ok = slope <= std::log(alpha) + c.tol(kSlopeSlack);
  CriterionResult r{"3", rate_ok && steps_ok && contraction_ok && slope_ok, rep.success_rate, 0.9, ""};
  Detail d;
  d << "success " << rep.success_rate << " over 50 repeats at eps^2=1e-4, T=" << rep.steps
    << " (predicted " << st.s.predicted_T << ", eta=" << st.s.eta << ", alpha=" << alpha << ")"
    << "; worst contraction excess " << worst_excess << " at t=" << worst_t << "; log slope " << slope
    << " vs ln(alpha)+" << c.tol(kSlopeSlack) << "=" << std::log(alpha) + c.tol(kSlopeSlack);
  r.detail = d.str();
  return r;
}

// ----------------------------------------------------------------- 4

struct FloorRun {
  double theta = 0, predicted_floor = 0, target = 0, terminal = 0, measured_floor = 0;
  std::int64_t T = 0;
};

inline constexpr std::size_t kCase2Batch = 8;

FloorRun case2_floor_run(const Ctx& c, double theta) {
  const AttackProbability beta = AttackProbability::constant(0.2);
  const MomentEstimates m = estimate_moments(square(), w_star_square(), theta, beta, kAcceptanceMcSamples, c.seed);
  const double w_err0 = squared_norm(w_star_square());
  // Probe the theta-scaled constants, then set eps^2 delta = 2 (c3/b1 + c2/c1).
  const CaseConstants probe = case2_schedule(m, kCase2Batch, 0.0, 0.0, w_err0, 1.0, 0.5);
  const double target = 2.0 * (probe.c3 / probe.b1p + probe.c2 / probe.c1p);
  const double delta = 0.1;
  const CaseConstants s = case2_schedule(m, kCase2Batch, 0.0, 0.0, w_err0, std::sqrt(target / delta), delta);

  OracleConfig o;
  o.w_star = w_star_square();
  o.theta_star = theta;
  o.beta = beta;
  o.perturbation = PerturbationKind::kUniform;
  ReluTronConfig rc;
  rc.batch = kCase2Batch;
  rc.eta = s.eta;
  rc.w_init = RealVector(2);
  rc.max_iters = 2 * static_cast<std::size_t>(s.predicted_T);
  TrainOptions to;
  to.repeats = 50;
  to.seed = c.seed;
  to.keep_traces = false;
  const TrainReport rep = relu_tron_train(square(), o, rc, s, to);

  FloorRun f;
  f.theta = theta;
  f.predicted_floor = s.predicted_floor;
  f.target = s.target;
  f.T = s.predicted_T;
  const auto T = static_cast<std::size_t>(s.predicted_T);
  f.terminal = rep.mean_trajectory[T - 1];
  double sum = 0.0;
  for (std::size_t t = T - 1; t < rep.mean_trajectory.size(); ++t) sum += rep.mean_trajectory[t];
  f.measured_floor = sum / static_cast<double>(rep.mean_trajectory.size() - (T - 1));
  return f;
}

CriterionResult crit_4(const Ctx& c) {
  std::vector<FloorRun> runs;
  for (double th : {0.025, 0.05, 0.1}) runs.push_back(case2_floor_run(c, th));
  bool ok = true;
  Detail d;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& f = runs[i];
    const bool term_ok = f.terminal <= f.predicted_floor + c.tol(f.target);
    ok = ok && term_ok;
    d << "theta*=" << f.theta << ": X_T=" << f.terminal << " vs floor+target=" << f.predicted_floor + f.target
      << " (T=" << f.T << "), measured floor " << f.measured_floor << "; ";
    if (i > 0) {
      const double ratio = f.measured_floor / runs[i - 1].measured_floor;
      // Quadratic scaling gives 4; the factor-2 band shrinks to a point at scale 0.
      const double lo = 4.0 / std::pow(2.0, c.scale), hi = 4.0 * std::pow(2.0, c.scale);
      const bool ratio_ok = ratio >= lo && ratio <= hi;
      ok = ok && ratio_ok && f.measured_floor > runs[i - 1].measured_floor;
      d << "ratio " << ratio << "; ";
    }
  }
  return {"4", ok, runs.back().measured_floor / runs[1].measured_floor, 8.0, d.str()};
}

// ----------------------------------------------------------------- 5

CriterionResult crit_5(const Ctx& c) {
  const MomentEstimates m = estimate_moments(square(), w_star_square(), 0.0, AttackProbability::constant(0.0),
                                             kAcceptanceMcSamples, c.seed);
  const std::vector<std::size_t> bs{1, 2, 4, 8, 16, 32};
  std::vector<std::int64_t> predicted, hits;
  for (std::size_t b : bs) {
    const CaseConstants s = case1_schedule(m, b, 1.0, squared_norm(w_star_square()), 1e-2, 0.1);
    predicted.push_back(s.predicted_T);
    ReluTronConfig rc;
    rc.batch = b;
    rc.eta = s.eta;
    rc.w_init = RealVector(2);
    rc.max_iters = 2 * static_cast<std::size_t>(s.predicted_T);
    TrainOptions to;
    to.repeats = 50;
    to.seed = c.seed;
    to.keep_traces = false;
    const TrainReport rep = relu_tron_train(square(), clean_oracle(), rc, s, to);
    std::int64_t hit = -1;
    for (std::size_t t = 0; t < rep.mean_trajectory.size(); ++t) {
      if (rep.mean_trajectory[t] <= s.target) {
        hit = static_cast<std::int64_t>(t) + 1;
        break;
      }
    }
    hits.push_back(hit);
  }
  const auto slack = static_cast<std::int64_t>(std::llround(c.tol(1.0)));
  bool ok = true;
  std::int64_t worst = 0;
  for (std::size_t i = 1; i < bs.size(); ++i) {
    ok = ok && predicted[i] <= predicted[i - 1];
    ok = ok && hits[i] > 0 && hits[i - 1] > 0 && hits[i] <= hits[i - 1] + slack;
    worst = std::max(worst, hits[i] - hits[i - 1]);
  }
  Detail d;
  d << "b: predicted_T / first hit of mean X_t <= eps^2 delta:";
  for (std::size_t i = 0; i < bs.size(); ++i) d << " " << bs[i] << ":" << predicted[i] << "/" << hits[i];
  return {"5", ok, static_cast<double>(worst), static_cast<double>(slack), d.str()};
}

// ----------------------------------------------------------------- 6

CriterionResult crit_6(const Ctx& c) {
  const RealVector& ws = w_star_square();
  const double off = 0.3 / std::sqrt(2.0);
  const RealVector w_adv{ws[0] + off, ws[1] + off};
  const OracleConfig o = make_realization_attack(ws, w_adv, std::sqrt(2.0));
  const MomentEstimates m =
      estimate_moments(square(), w_adv, o.theta_star, AttackProbability::constant(0.0), kAcceptanceMcSamples, c.seed);
  const CaseConstants s = case1_schedule(m, 8, 1.0, squared_norm(w_adv), 1e-3, 1.0);
  ReluTronConfig rc;
  rc.batch = 8;
  rc.eta = s.eta;
  rc.w_init = RealVector(2);
  rc.max_iters = 2000;
  TrainOptions to;
  to.repeats = 10;
  to.seed = c.seed;
  to.reference = w_adv;
  to.keep_traces = false;
  const TrainReport rep = relu_tron_train(square(), o, rc, s, to);
  double worst_adv = 0.0, worst_star_gap = 0.0;
  for (const auto& w : rep.final_iterates) {
    worst_adv = std::max(worst_adv, norm(w - w_adv));
    worst_star_gap = std::max(worst_star_gap, std::abs(norm(w - ws) - 0.3));
  }
  const double tol = c.tol(1e-3);
  CriterionResult r{"6", worst_adv < tol && worst_star_gap <= tol, worst_adv, tol, ""};
  Detail d;
  d << "theta*=" << o.theta_star << ", eta=" << s.eta << ", 2000 steps, 10 repeats; max ||w_T - w_adv||=" << worst_adv
    << ", max | ||w_T - w*|| - 0.3 |=" << worst_star_gap;
  r.detail = d.str();
  return r;
}

// ----------------------------------------------------------------- 7, 8

Dataset glm_data(Rng& rng, std::size_t count, std::size_t n, const Activation& act, const RealVector& w,
                 const std::function<double(Rng&)>& noise) {
  const InputDistribution ball = InputDistribution::unit_ball(n);
  Dataset d;
  for (std::size_t i = 0; i < count; ++i) {
    RealVector x = ball.draw(rng);
    const double y = act.fn(dot(w, x)) + noise(rng);
    d.push_back({std::move(x), y});
  }
  return d;
}

// Instances with bounded noise, several activations; every step must satisfy
// the step-decrease inequality.
std::pair<std::size_t, std::size_t> glm_step_property(std::uint64_t seed, std::size_t instances) {
  std::size_t checks = 0, failures = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    Rng rng = make_rng(seed, k, 0x6c656d31);
    const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * 4.0);
    const int which = static_cast<int>(uniform01(rng) * 3.0);
    const Activation act = which == 0   ? Activation::relu()
                           : which == 1 ? Activation::leaky(uniform(rng, 0.0, 1.0))
                                        : Activation::clipped_linear();
    RealVector w(n);
    for (auto& v : w) v = standard_normal(rng);
    w *= uniform(rng, 0.2, 1.0) / norm(w);
    const double theta = uniform(rng, 0.0, 0.1);
    const bool signed_noise = uniform01(rng) < 0.5;
    const auto noise = [&](Rng& g) {
      const double u = uniform01(g);
      return signed_noise ? (u < 0.5 ? -theta : theta) : theta * (2.0 * u - 1.0);
    };
    const auto S = static_cast<std::size_t>(uniform(rng, 50.0, 200.0));
    const Dataset d = glm_data(rng, S, n, act, w, noise);
    GlmTronConfig cfg;
    cfg.activation = act;
    cfg.epsilon = 1e-3;
    cfg.max_iters = 30;
    const GlmTronTrace tr = glm_tron_run(d, cfg, w);
    double W = norm(w);
    for (const auto& it : tr.iterates) W = std::max(W, norm(it - w));
    for (bool ok : check_step_decrease(tr, d, act, w, residual_norm(d, act, w), W)) {
      ++checks;
      if (!ok) ++failures;
    }
  }
  return {checks, failures};
}

CriterionResult crit_7(const Ctx& c) {
  const RealVector w{0.6, 0.8};
  const Activation act = Activation::relu();
  GlmTronConfig cfg;
  cfg.activation = act;
  cfg.epsilon = 0.05;
  cfg.max_iters = 20;
  std::size_t successes = 0;
  double worst = 0.0, alpha = 0.0;
  std::vector<double> mean_err(21, 0.0);
  for (std::size_t s = 0; s < 20; ++s) {
    Rng rng = make_rng(c.seed, s, 0x676c6d37);
    const Dataset d = glm_data(rng, 200, 2, act, w, [](Rng&) { return 0.0; });
    const GlmTronTrace tr = glm_tron_run(d, cfg, w);
    const double fin = tr.effective_erm.back();
    worst = std::max(worst, fin);
    if (fin < c.tol(cfg.epsilon)) ++successes;
    for (std::size_t t = 0; t < tr.w_norm_err.size() && t < mean_err.size(); ++t) {
      mean_err[t] += tr.w_norm_err[t] * tr.w_norm_err[t] / 20.0;
    }
    // Linearized rate about w*: the active-set second moment H has spectrum in
    // [0, 1] for ||x|| <= 1, so ||I - H||^2 = (1 - lambda_min(H))^2.
    RealMatrix H(2, 2);
    for (const auto& smp : d.samples())
      if (dot(w, smp.x) > 0.0) H += RealMatrix::outer(smp.x, smp.x);
    H *= 1.0 / static_cast<double>(d.size());
    const double lm = lambda_min_symmetric(H);
    alpha = std::max(alpha, (1.0 - lm) * (1.0 - lm));
  }
  const auto [checks, failures] = glm_step_property(c.seed, 100);
  const double slope = log_slope(mean_err, mean_err.size() - 1);
  const bool slope_ok = slope <= std::log(alpha) + c.tol(kSlopeSlack);
  const bool ok = successes == 20 && failures == 0 && checks > 0 && slope_ok;
  Detail d;
  d << successes << "/20 seeds with effective ERM < 0.05 at T=20 (worst " << worst << "); step-decrease " << checks - failures
    << "/" << checks << " steps over 100 instances; log slope " << slope << " vs ln((1-lambda_min H)^2)+"
    << c.tol(kSlopeSlack) << "=" << std::log(alpha) + c.tol(kSlopeSlack);
  return {"7", ok, worst, c.tol(cfg.epsilon), d.str()};
}

CriterionResult crit_8(const Ctx& c) {
  const RealVector w{0.6, 0.8};
  const Activation act = Activation::relu();
  GlmTronConfig cfg;
  cfg.activation = act;
  cfg.epsilon = 0.05;
  cfg.max_iters = 1000;
  const double theta = 0.1;
  const std::size_t redraws = 200;
  std::vector<double> risk(redraws);
  parallel_for(redraws, [&](std::size_t k) {
    Rng rng = make_rng(c.seed, k, 0x63657274);
    const Dataset d = glm_data(rng, 200, 2, act, w, [theta](Rng& g) { return uniform(g, -theta, theta); });
    risk[k] = glm_tron_run(d, cfg, w).true_erm.back();
  });
  double mean = 0.0;
  for (double v : risk) mean += v / static_cast<double>(redraws);
  const RiskCertificate cert = noise_risk_certificate(mean, theta * theta / 3.0, act.lipschitz, cfg.epsilon, theta, norm(w));
  const double bound = c.tol(cert.bound);
  CriterionResult r{"8", mean <= bound, mean, bound, ""};
  Detail d;
  d << "mean L_S(h_T) over " << redraws << " redraws = " << mean << " <= certificate " << cert.bound
    << " (E[xi^2]=1/300, L=1, eps=0.05, theta=0.1, W=1)";
  r.detail = d.str();
  return r;
}

// ----------------------------------------------------------------- 9

CriterionResult crit_9a(const Ctx& c) {
  Dataset d({{RealVector{1.0}, 0.0}, {RealVector{-1.0}, 0.0}});
  NetClass nc;
  nc.patches = {RealMatrix{{1.0}}};
  const RealMatrix M{{1.0}};
  const double lambda1 = consistency_check(nc, empirical_covariance(d), M).lambda_min_value;
  const NeuroTronSchedule s = theorem5_schedule(nc, M, radius(d), lambda1, 0.0, 0.0, 0.0, 1.0, 1e-6);
  const NeuroTronTrace tr = neurotron_run(d, nc, M, s.eta, 200, RealVector{1.0});
  const double w = std::abs(tr.iterates.back()[0]);
  const double tol = c.tol(1e-6);
  Detail det;
  det << "eta=" << s.eta << ", " << tr.iterates.size() - 1 << " steps from w_1=1" << (tr.early_stopped ? " (early stop)" : "")
      << ", |w_T|=" << w;
  return {"9a", w < tol, w, tol, det.str()};
}

struct Neuro9b {
  NetClass nc;
  RealMatrix M;
  RealVector w_ref;
  Dataset data;
  NeuroTronSchedule s;
};

Neuro9b neuro_instance(std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, 0x39623962);
  Neuro9b in;
  in.M = sample_full_rank_M(3, 4, 64, rng);
  in.M *= 1.0 / spectral_norm(in.M);
  RealMatrix C(3, 4);
  for (auto& v : C.entries()) v = standard_normal(rng);
  C *= 0.05 / spectral_norm(C);
  in.nc = sample_net_class(in.M, C, 2, 0.0);
  in.w_ref = RealVector(3);
  for (auto& v : in.w_ref) v = standard_normal(rng);
  in.w_ref *= 1.0 / norm(in.w_ref);
  const InputDistribution sphere = InputDistribution::unit_sphere(4);
  Dataset raw;
  for (std::size_t i = 0; i < 100; ++i) {
    RealVector x = sphere.draw(rng);
    const double y = net_forward(in.nc, in.w_ref, x);
    raw.push_back({std::move(x), y});
  }
  const NetClass nc = in.nc;
  const RealVector wr = in.w_ref;
  in.data = symmetrize(raw, LabelRule::map([nc, wr](const LabeledSample& s) { return net_forward(nc, wr, -s.x); }));
  const double lambda1 = consistency_check(in.nc, empirical_covariance(in.data), in.M).lambda_min_value;
  in.s = theorem5_schedule(in.nc, in.M, radius(in.data), lambda1, 0.0, 0.0, 0.0, squared_norm(in.w_ref), 1e-6);
  return in;
}

CriterionResult crit_9b(const Ctx& c) {
  const Neuro9b in = neuro_instance(c.seed);
  const auto T = static_cast<std::size_t>(in.s.predicted_T);
  const NeuroTronTrace a = neurotron_run(in.data, in.nc, in.M, in.s.eta, T, RealVector(3));
  Rng rng = make_rng(c.seed, 1, 0x39623962);
  RealVector init(3);
  for (auto& v : init) v = standard_normal(rng);
  const NeuroTronTrace b = neurotron_run(in.data, in.nc, in.M, in.s.eta, T, init);
  const double err = norm(a.iterates.back() - in.w_ref);
  const double agree = norm(a.iterates.back() - b.iterates.back());
  std::vector<double> sq;
  for (const auto& w : a.iterates) sq.push_back(squared_distance(w, in.w_ref));
  const double slope = log_slope(sq, last_above(sq, 1e-20));
  const bool slope_ok = slope <= std::log(in.s.alpha_rate) + c.tol(kSlopeSlack);
  const bool ok = err < c.tol(1e-6) && agree < c.tol(2e-6) && slope_ok;
  Detail d;
  d << "S=" << in.data.size() << ", lambda1=" << in.s.lambda1 << ", eta=" << in.s.eta << ", predicted T=" << T
    << "; ||w_T - w_ref||=" << err << ", two-init gap " << agree << "; log slope " << slope << " vs ln(alpha)+"
    << c.tol(kSlopeSlack) << "=" << std::log(in.s.alpha_rate) + c.tol(kSlopeSlack);
  return {"9b", ok, err, c.tol(1e-6), d.str()};
}

RealMatrix gaussian_matrix(std::size_t r, std::size_t n, Rng& rng) {
  RealMatrix A(r, n);
  for (auto& v : A.entries()) v = standard_normal(rng);
  return A;
}

Dataset symmetric_inputs(std::size_t n, std::size_t count, Rng& rng) {
  const InputDistribution ball = InputDistribution::unit_ball(n);
  Dataset raw;
  for (std::size_t i = 0; i < count; ++i) raw.push_back({ball.draw(rng), 0.0});
  return symmetrize(raw);
}

CriterionResult crit_9c(const Ctx& c) {
  std::size_t l2_checks = 0, l2_fail = 0, instances = 0;
  double worst_l4 = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    Rng rng = make_rng(c.seed, k, 0x39633963);
    const std::size_t n = 3 + static_cast<std::size_t>(uniform01(rng) * 3.0);
    const std::size_t r = 2 + static_cast<std::size_t>(uniform01(rng) * (static_cast<double>(n) - 1.0));
    const double alpha = uniform(rng, 0.0, 1.0);
    // Symmetry identity on a symmetric set with arbitrary A, M.
    {
      const Dataset d = symmetric_inputs(n, 40, rng);
      const RealMatrix A = gaussian_matrix(r, n, rng);
      const RealMatrix M = gaussian_matrix(r, n, rng);
      RealVector z1(r), z2(r);
      for (auto& v : z1) v = standard_normal(rng);
      for (auto& v : z2) v = standard_normal(rng);
      const auto [lhs, rhs] = lemma4_sides(d, A, M, z1, z2, alpha);
      worst_l4 = std::max(worst_l4, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    // Per-step inequality along a short run with bounded label noise.
    RealMatrix M = sample_full_rank_M(r, n, 4 * r + 4, rng);
    M *= 1.0 / spectral_norm(M);
    RealMatrix C = gaussian_matrix(r, n, rng);
    C *= uniform(rng, 0.01, 0.2) / spectral_norm(C);
    const NetClass nc = sample_net_class(M, C, 1 + static_cast<std::size_t>(uniform01(rng) * 3.0), alpha);
    RealVector w(r);
    for (auto& v : w) v = standard_normal(rng);
    const double theta = uniform(rng, 0.0, 0.1);
    Dataset raw;
    const InputDistribution ball = InputDistribution::unit_ball(n);
    for (std::size_t i = 0; i < 30; ++i) {
      RealVector x = ball.draw(rng);
      const double y = net_forward(nc, w, x) + uniform(rng, -theta, theta);
      raw.push_back({std::move(x), y});
    }
    const Dataset d = symmetrize(raw, LabelRule::copy());
    if (!consistency_check(nc, empirical_covariance(d), M).consistent) continue;
    ++instances;
    RealVector init(r);
    for (auto& v : init) v = standard_normal(rng);
    const double eta = uniform(rng, 0.05, 1.0);
    const NeuroTronTrace tr = neurotron_run(d, nc, M, eta, 20, init);
    for (bool ok : lemma2_check(tr, d, nc, M, w, eta)) {
      ++l2_checks;
      if (!ok) ++l2_fail;
    }
  }
  const double tol = c.tol(1e-9);
  const bool ok = l2_fail == 0 && l2_checks > 0 && instances >= 90 && worst_l4 <= tol;
  Detail d;
  d << "step inequality: " << l2_checks - l2_fail << "/" << l2_checks << " steps over " << instances
    << " consistent instances; symmetry identity worst relative gap " << worst_l4;
  return {"9c", ok, worst_l4, tol, d.str()};
}

CriterionResult crit_9d(const Ctx& c) {
  double worst = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    Rng rng = make_rng(c.seed, k, 0x39643964);
    const std::size_t n = 3, r = 2;
    NetClass nc;
    nc.patches = {gaussian_matrix(r, n, rng)};
    const RealMatrix& A1 = nc.patches.front();
    RealVector w_true(r), w(r);
    for (auto& v : w_true) v = standard_normal(rng);
    for (auto& v : w) v = standard_normal(rng);
    Dataset raw;
    const InputDistribution ball = InputDistribution::unit_ball(n);
    for (std::size_t i = 0; i < 50; ++i) {
      RealVector x = ball.draw(rng);
      const double y = net_forward(nc, w_true, x);
      raw.push_back({std::move(x), y});
    }
    const Dataset d = symmetrize(raw, LabelRule::copy());
    const RealVector g = neurotron_direction(d, nc, A1, w);
    const double h = 1e-6;
    RealVector fd(r);
    for (std::size_t i = 0; i < r; ++i) {
      RealVector wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      fd[i] = (surrogate_risk(d, A1, wp) - surrogate_risk(d, A1, wm)) / (2.0 * h);
    }
    worst = std::max(worst, norm(fd + g) / std::max(norm(g), 1e-12));
  }
  const double tol = c.tol(1e-5);
  Detail d;
  d << "central differences h=1e-6 over 20 width-1 instances (M=A1); worst relative error " << worst;
  return {"9d", worst <= tol, worst, tol, d.str()};
}

// ----------------------------------------------------------------- 10

CriterionResult crit_10(const Ctx& c) {
  bool ok = true;
  Detail d;
  double worst_floor = 0.0;
  std::size_t total = 0;
  for (RecursionLemma l : {RecursionLemma::kCase1, RecursionLemma::kCase2, RecursionLemma::kLemma6}) {
    const RecursionVerification v = verify_recursion(l, 500, c.seed);
    ok = ok && v.all_certified();
    total += v.certified;
    d << lemma_cli_name(l) << " " << v.certified << "/500; ";
    if (l == RecursionLemma::kLemma6) {
      for (const auto& o : v.outcomes) {
        worst_floor = std::max(worst_floor, o.floor_abs_err / std::max(1.0, std::abs(o.bound.floor)));
      }
    }
  }
  const double tol = c.tol(kFloorIdentityTolerance);
  ok = ok && worst_floor <= tol;
  d << "recurse2lemma6 floor vs beta/(1-alpha) worst scaled gap " << worst_floor;
  return {"10", ok, worst_floor, tol, d.str()};
}

using Runner = CriterionResult (*)(const Ctx&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"1a", crit_1a}, {"1b", crit_1b}, {"2", crit_2},   {"3", crit_3},   {"4", crit_4},   {"5", crit_5},   {"6", crit_6},
      {"7", crit_7},   {"8", crit_8},   {"9a", crit_9a}, {"9b", crit_9b}, {"9c", crit_9c}, {"9d", crit_9d}, {"10", crit_10}};
  return r;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opts) {
  for (const auto& [name, fn] : registry()) {
    if (name != id) continue;
    try {
      return fn(Ctx{opts.seed, opts.tolerance_scale});
    } catch (const std::exception& e) {
      return {id, false, NAN, NAN, std::string("error: ") + e.what()};
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown acceptance criterion '" + id + "'");
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  for (const auto& id : criterion_ids()) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof(head), "[%s] %-3s measured=%-12.6g tol=%-12.6g ", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                r.measured, r.tolerance);
  return head + r.detail;
}

}  // namespace tt
