// SPDX-License-Identifier: Apache-2.0
#include "trontrain/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trontrain/data_model.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/error.hpp"
#include "trontrain/glm_tron.hpp"
#include "trontrain/neurotron.hpp"
#include "trontrain/parallel.hpp"
#include "trontrain/relu_tron.hpp"

namespace tt {

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(config_to_json(cfg).dump()));
  return buf;
}

namespace {

struct Assertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

Json assertions_to_json(const std::vector<Assertion>& as) {
  Json out = Json::array();
  for (const auto& a : as) out.push_back({{"name", a.name}, {"value", a.value}, {"threshold", a.threshold}, {"pass", a.pass}});
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  f << text;
  if (!f) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_out_dir(const RunOptions& opts) {
  std::filesystem::path dir(opts.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory '" + opts.out_dir + "': " + ec.message());
  return dir;
}

// First 1-based index t with traj[t-1] <= target, or -1.
std::int64_t first_hit(const std::vector<double>& traj, double target) {
  for (std::size_t t = 0; t < traj.size(); ++t)
    if (traj[t] <= target) return static_cast<std::int64_t>(t) + 1;
  return -1;
}

// Least-squares slope of log(traj) over entries above `floor_cut`.
double log_slope(const std::vector<double>& traj, double floor_cut) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    if (!(traj[t] > floor_cut)) break;
    const double x = static_cast<double>(t);
    const double y = std::log(traj[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Json provenance_json(const MomentEstimates& m) {
  return Json{{"kind", m.provenance == Provenance::kAnalytic ? "analytic" : "monte_carlo"},
              {"n_samples", m.n_samples},
              {"constants", moments_to_json(m)},
              {"std_err", moments_std_err_to_json(m)}};
}

// ---------------------------------------------------------------- relu_tron

struct ReluPlan {
  InputDistribution dist;
  OracleConfig oracle;
  RealVector reference;  // w* or w_adv under the realization attack
  RealVector w_init;
  MomentEstimates moments;
  CaseConstants schedule;
};

ReluPlan plan_relu(const ExperimentConfig& cfg) {
  const auto& rs = cfg.relu_tron;
  ReluPlan p{cfg.distribution.build(), {}, {}, {}, {}, {}};
  p.oracle = cfg.oracle.build(p.dist);
  const bool realization = p.oracle.perturbation == PerturbationKind::kRealization;
  // Realization replies are exactly relu(w_advᵀx), so w_adv is the fixed point.
  p.reference = realization ? p.oracle.w_adv : p.oracle.w_star;
  p.w_init = rs.w_init.empty() ? RealVector(p.dist.dim()) : rs.w_init;
  const double w_err0 = squared_distance(p.w_init, p.reference);

  std::string which = rs.which_case;
  if (which == "auto") {
    which = (realization || p.oracle.theta_star == 0.0 || p.oracle.beta.sup() == 0.0) ? "I" : "II";
  }
  const AttackProbability beta = realization ? AttackProbability::constant(0.0) : p.oracle.beta;
  p.moments = estimate_moments(p.dist, p.reference, p.oracle.theta_star, beta, rs.mc_samples, cfg.seed);
  if (which == "I") {
    p.schedule = case1_schedule(p.moments, rs.batch, rs.delta0, w_err0, cfg.eps, cfg.delta);
  } else {
    p.schedule = case2_schedule(p.moments, rs.batch, rs.K, rs.gamma, w_err0, cfg.eps, cfg.delta);
  }
  return p;
}

RunResult run_relu(const ExperimentConfig& cfg, const RunOptions& opts, Json summary) {
  const ReluPlan plan = plan_relu(cfg);
  const auto& s = plan.schedule;
  summary["provenance"] = provenance_json(plan.moments);
  summary["schedule"] = case_constants_to_json(s);
  RunResult res;
  if (opts.dry_run) {
    res.summary = std::move(summary);
    return res;
  }

  ReluTronConfig rc;
  rc.batch = cfg.relu_tron.batch;
  rc.eta = s.eta;
  rc.max_iters = cfg.relu_tron.steps;
  rc.w_init = plan.w_init;
  TrainOptions to;
  to.repeats = cfg.repeats;
  to.seed = cfg.seed;
  to.reference = plan.reference;
  to.success_threshold = cfg.eps * cfg.eps;
  to.keep_traces = !opts.out_dir.empty();
  const TrainReport rep = relu_tron_train(plan.dist, plan.oracle, rc, s, to);

  double mean_final = 0.0;
  for (double v : rep.final_sq_err) mean_final += v;
  mean_final /= static_cast<double>(rep.final_sq_err.size());
  const double target = s.target + s.predicted_floor;
  const std::int64_t hit = first_hit(rep.mean_trajectory, target);
  summary["empirical"] = {{"steps", rep.steps},
                          {"success_threshold", rep.success_threshold},
                          {"success_rate", rep.success_rate},
                          {"mean_final_sq_err", mean_final},
                          {"mean_target", target},
                          {"predicted_T", s.predicted_T},
                          {"empirical_T", hit >= 0 ? Json(hit) : Json(nullptr)},
                          {"log_slope", log_slope(rep.mean_trajectory, std::max(target, 1e-300))},
                          {"log_alpha_rate", s.alpha_rate > 0.0 ? Json(std::log(s.alpha_rate)) : Json(nullptr)},
                          {"final_sq_err", rep.final_sq_err}};

  std::vector<Assertion> as;
  const auto& a = cfg.assertions;
  if (a.min_success_rate) {
    as.push_back({"min_success_rate", rep.success_rate, *a.min_success_rate, rep.success_rate >= *a.min_success_rate});
  }
  if (a.max_final_error) {
    as.push_back({"max_final_error", mean_final, *a.max_final_error, mean_final <= *a.max_final_error});
  }
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    for (std::size_t r = 0; r < rep.traces.size(); ++r) {
      std::ostringstream os;
      write_sq_err_trace_csv(rep.traces[r], os);
      write_file(dir / ("trace_" + std::to_string(r) + ".csv"), os.str());
    }
  }
  summary["assertions"] = assertions_to_json(as);
  res.assertions_passed = std::all_of(as.begin(), as.end(), [](const Assertion& x) { return x.pass; });
  res.summary = std::move(summary);
  return res;
}

// ---------------------------------------------------------------- glm_tron

Dataset glm_dataset(const ExperimentConfig& cfg, const Activation& act, std::size_t repeat) {
  const auto& g = cfg.glm_tron;
  if (!g.dataset.empty()) return load_dataset_csv(g.dataset);
  const InputDistribution dist = cfg.distribution.build();
  Rng rng = make_rng(cfg.seed, repeat, 0x676c6d);
  Dataset d;
  for (std::size_t i = 0; i < g.samples; ++i) {
    RealVector x = dist.draw(rng);
    const double clean = act.fn(dot(g.w_star, x));
    const double xi = g.noise == "uniform" ? uniform(rng, -g.noise_theta, g.noise_theta) : 0.0;
    d.push_back({std::move(x), clean + xi});
  }
  return d;
}

RunResult run_glm(const ExperimentConfig& cfg, const RunOptions& opts, Json summary) {
  const auto& g = cfg.glm_tron;
  GlmTronConfig gc;
  gc.activation = Activation::by_name(g.activation, g.leaky_alpha);
  gc.max_iters = g.max_iters;
  gc.epsilon = cfg.eps;
  gc.validate();
  const bool has_ref = !g.w_star.empty();
  const double W = has_ref ? norm(g.w_star) : 0.0;
  const auto predicted_T = has_ref ? static_cast<std::int64_t>(std::ceil(W / cfg.eps)) : std::int64_t{-1};
  summary["provenance"] = {{"kind", "analytic"}};
  summary["schedule"] = {{"activation", gc.activation.name},
                         {"lipschitz", gc.activation.lipschitz},
                         {"eta", 1.0},
                         {"max_iters", gc.max_iters},
                         {"epsilon", cfg.eps},
                         {"predicted_T", predicted_T >= 0 ? Json(predicted_T) : Json(nullptr)}};
  RunResult res;
  if (opts.dry_run) {
    res.summary = std::move(summary);
    return res;
  }
  const std::optional<RealVector> ref = has_ref ? std::optional<RealVector>(g.w_star) : std::nullopt;
  std::vector<GlmTronTrace> traces(cfg.repeats);
  std::vector<std::size_t> step_checks(cfg.repeats, 0), step_fails(cfg.repeats, 0);
  parallel_for(cfg.repeats, [&](std::size_t r) {
    const Dataset d = glm_dataset(cfg, gc.activation, r);
    traces[r] = glm_tron_run(d, gc, ref);
    if (has_ref) {
      double Wt = 0.0;
      for (const auto& w : traces[r].iterates) Wt = std::max(Wt, norm(w - g.w_star));
      const auto checks = check_step_decrease(traces[r], d, gc.activation, g.w_star,
                                              residual_norm(d, gc.activation, g.w_star), std::max(W, Wt));
      step_checks[r] = checks.size();
      step_fails[r] = static_cast<std::size_t>(std::count(checks.begin(), checks.end(), false));
    }
  });

  std::vector<double> final_eff, final_true;
  std::size_t checks = 0, fails = 0, successes = 0;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    final_true.push_back(traces[r].true_erm.back());
    if (has_ref) {
      final_eff.push_back(traces[r].effective_erm.back());
      if (final_eff.back() < cfg.eps) ++successes;
    }
    checks += step_checks[r];
    fails += step_fails[r];
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  const double R = static_cast<double>(cfg.repeats);
  Json emp{{"steps", traces.front().iterates.size() - 1},
           {"mean_final_true_erm", mean(final_true)},
           {"step_decrease_checks", checks},
           {"step_decrease_failures", fails}};
  if (has_ref) {
    emp["mean_final_effective_erm"] = mean(final_eff);
    emp["success_rate"] = static_cast<double>(successes) / R;
    emp["final_effective_erm"] = final_eff;
  }
  if (g.noise == "uniform" && has_ref && gc.activation.lipschitz < 2.0) {
    const double th = g.noise_theta;
    const RiskCertificate c =
        noise_risk_certificate(mean(final_true), th * th / 3.0, gc.activation.lipschitz, cfg.eps, th, W);
    emp["risk_certificate"] = {{"bound", c.bound}, {"holds", c.holds}};
  }
  summary["empirical"] = emp;

  std::vector<Assertion> as;
  const auto& a = cfg.assertions;
  if (a.min_success_rate && has_ref) {
    const double v = emp["success_rate"].get<double>();
    as.push_back({"min_success_rate", v, *a.min_success_rate, v >= *a.min_success_rate});
  }
  if (a.max_effective_erm && has_ref) {
    const double v = *std::max_element(final_eff.begin(), final_eff.end());
    as.push_back({"max_effective_erm", v, *a.max_effective_erm, v <= *a.max_effective_erm});
  }
  if (a.max_final_error) {
    const double v = mean(final_true);
    as.push_back({"max_final_error", v, *a.max_final_error, v <= *a.max_final_error});
  }
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    for (std::size_t r = 0; r < traces.size(); ++r) {
      std::ostringstream os;
      write_glm_trace_csv(traces[r], os);
      write_file(dir / ("trace_" + std::to_string(r) + ".csv"), os.str());
    }
  }
  summary["assertions"] = assertions_to_json(as);
  res.assertions_passed = std::all_of(as.begin(), as.end(), [](const Assertion& x) { return x.pass; });
  res.summary = std::move(summary);
  return res;
}

// ---------------------------------------------------------------- neurotron

struct NeuroInstance {
  NetClass nc;
  RealMatrix M;
  RealVector w_ref;
  Dataset data;
  double lambda1 = 0.0;
  NeuroTronSchedule schedule;
};

NeuroInstance build_neuro(const ExperimentConfig& cfg, std::size_t repeat) {
  const auto& ns = cfg.neurotron;
  Rng rng = make_rng(cfg.seed, repeat, 0x6e6575);
  NeuroInstance in;
  in.M = sample_full_rank_M(ns.r, ns.n, ns.wishart_dof, rng);
  in.M *= 1.0 / spectral_norm(in.M);
  RealMatrix C(ns.r, ns.n);
  for (auto& v : C.entries()) v = standard_normal(rng);
  C *= ns.c_norm / spectral_norm(C);
  in.nc = sample_net_class(in.M, C, ns.half_width, ns.alpha);

  if (cfg.oracle.w_star.dim() == ns.r) {
    in.w_ref = cfg.oracle.w_star;
  } else {
    in.w_ref = RealVector(ns.r);
    for (auto& v : in.w_ref) v = standard_normal(rng);
    in.w_ref *= 1.0 / norm(in.w_ref);
  }

  const InputDistribution dist = cfg.distribution.build();
  if (dist.dim() != ns.n) fail(ErrorCode::kDimensionMismatch, "neurotron: distribution dimension must equal neurotron.n");
  const double th = ns.noise_theta;
  auto noisy = [&](const RealVector& x) {
    const double xi = th > 0.0 ? uniform(rng, -th, th) : 0.0;
    return net_forward(in.nc, in.w_ref, x) + xi;
  };
  Dataset raw;
  for (std::size_t i = 0; i < ns.samples; ++i) {
    RealVector x = dist.draw(rng);
    const double y = noisy(x);
    raw.push_back({std::move(x), y});
  }
  in.data = symmetrize(raw, LabelRule::map([&](const LabeledSample& s) { return noisy(-s.x); }));

  const Consistency cc = consistency_check(in.nc, empirical_covariance(in.data), in.M);
  in.lambda1 = cc.lambda_min_value;
  const double B = radius(in.data);
  const double w_err0 = squared_norm(in.w_ref);
  double mu = 0.0;
  if (th > 0.0) {
    const double a = ns.alpha;
    mu = ns.mu_factor * std::sqrt(B * spectral_norm(in.M) / ((1.0 + a) * in.lambda1));
  }
  in.schedule = theorem5_schedule(in.nc, in.M, B, in.lambda1, th, mu, ns.gamma, w_err0, cfg.eps);
  return in;
}

RunResult run_neuro(const ExperimentConfig& cfg, const RunOptions& opts, Json summary) {
  const auto& ns = cfg.neurotron;
  const NeuroInstance first = build_neuro(cfg, 0);
  summary["provenance"] = {{"kind", "analytic"}, {"note", "constants computed exactly from the sampled data"}};
  summary["schedule"] = neuro_schedule_to_json(first.schedule);
  RunResult res;
  if (opts.dry_run) {
    res.summary = std::move(summary);
    return res;
  }

  std::vector<NeuroTronTrace> traces(cfg.repeats);
  std::vector<double> final_err(cfg.repeats), interp(cfg.repeats);
  std::vector<std::int64_t> predicted(cfg.repeats);
  parallel_for(cfg.repeats, [&](std::size_t r) {
    const NeuroInstance in = r == 0 ? first : build_neuro(cfg, r);
    const double eta = ns.eta > 0.0 ? ns.eta : in.schedule.eta;
    const std::size_t iters = ns.max_iters > 0 ? ns.max_iters : static_cast<std::size_t>(in.schedule.predicted_T);
    traces[r] = neurotron_run(in.data, in.nc, in.M, eta, iters, RealVector(ns.r));
    final_err[r] = squared_distance(traces[r].iterates.back(), in.w_ref);
    interp[r] = interpolation_error(in.data, in.nc, traces[r].iterates.back());
    predicted[r] = in.schedule.predicted_T;
  });

  const double target = cfg.eps * cfg.eps + first.schedule.predicted_floor;
  std::size_t successes = 0;
  double mean_final = 0.0;
  for (double e : final_err) {
    mean_final += e;
    if (e <= target) ++successes;
  }
  mean_final /= static_cast<double>(cfg.repeats);
  const double rate = static_cast<double>(successes) / static_cast<double>(cfg.repeats);
  summary["empirical"] = {{"success_threshold", target},
                          {"success_rate", rate},
                          {"mean_final_sq_err", mean_final},
                          {"final_sq_err", final_err},
                          {"final_interpolation_error", interp},
                          {"predicted_T", predicted},
                          {"steps", traces.front().iterates.size() - 1},
                          {"early_stopped", traces.front().early_stopped}};

  std::vector<Assertion> as;
  const auto& a = cfg.assertions;
  if (a.min_success_rate) as.push_back({"min_success_rate", rate, *a.min_success_rate, rate >= *a.min_success_rate});
  if (a.max_final_error) {
    as.push_back({"max_final_error", mean_final, *a.max_final_error, mean_final <= *a.max_final_error});
  }
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    for (std::size_t r = 0; r < traces.size(); ++r) {
      std::ostringstream os;
      write_neuro_trace_csv(traces[r], os);
      write_file(dir / ("trace_" + std::to_string(r) + ".csv"), os.str());
    }
  }
  summary["assertions"] = assertions_to_json(as);
  res.assertions_passed = std::all_of(as.begin(), as.end(), [](const Assertion& x) { return x.pass; });
  res.summary = std::move(summary);
  return res;
}

// ---------------------------------------------------------------- recursion

RunResult run_recursion(const ExperimentConfig& cfg, const RunOptions& opts, Json summary) {
  const RecursionLemma lemma = parse_lemma(cfg.verify_recursion.lemma);
  summary["schedule"] = {{"lemma", lemma_cli_name(lemma)}, {"draws", cfg.verify_recursion.draws}};
  RunResult res;
  if (opts.dry_run) {
    res.summary = std::move(summary);
    return res;
  }
  const RecursionVerification v = verify_recursion(lemma, cfg.verify_recursion.draws, cfg.seed);
  Json emp{{"draws", v.draws}, {"certified", v.certified}};
  if (lemma == RecursionLemma::kLemma6) emp["max_floor_abs_err"] = v.max_floor_abs_err;
  summary["empirical"] = emp;
  std::vector<Assertion> as;
  if (cfg.assertions.require_all_certified) {
    as.push_back({"require_all_certified", static_cast<double>(v.certified), static_cast<double>(v.draws),
                  v.all_certified()});
  }
  if (!opts.out_dir.empty()) {
    const auto dir = prepare_out_dir(opts);
    std::ostringstream os;
    os << "draw,predicted_T,alpha,beta,eps_prime_sq,final_delta,certified\n";
    for (const auto& o : v.outcomes) {
      os << o.index << ',' << o.bound.predicted_T << ',' << format_real(o.bound.alpha) << ','
         << format_real(o.bound.beta) << ',' << format_real(o.params.eps_prime_sq) << ','
         << format_real(o.final_delta) << ',' << (o.certified ? 1 : 0) << '\n';
    }
    write_file(dir / "trace_0.csv", os.str());
  }
  summary["assertions"] = assertions_to_json(as);
  res.assertions_passed = std::all_of(as.begin(), as.end(), [](const Assertion& x) { return x.pass; });
  res.summary = std::move(summary);
  return res;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Json summary;
  summary["config_hash"] = config_hash(cfg);
  summary["algorithm"] = algorithm_name(cfg.algorithm);
  summary["seed"] = cfg.seed;
  summary["config"] = config_to_json(cfg);
  RunResult res;
  switch (cfg.algorithm) {
    case Algorithm::kReluTron:
      res = run_relu(cfg, opts, std::move(summary));
      break;
    case Algorithm::kGlmTron:
      res = run_glm(cfg, opts, std::move(summary));
      break;
    case Algorithm::kNeuroTron:
      res = run_neuro(cfg, opts, std::move(summary));
      break;
    case Algorithm::kVerifyRecursion:
      res = run_recursion(cfg, opts, std::move(summary));
      break;
  }
  res.summary["all_assertions_passed"] = res.assertions_passed;
  res.exit_code = res.assertions_passed ? 0 : 1;
  if (!opts.dry_run && !opts.out_dir.empty()) {
    write_file(prepare_out_dir(opts) / "summary.json", res.summary.dump(2) + "\n");
  }
  return res;
}

RecursionParams draw_recursion_params(RecursionLemma lemma, Rng& rng) {
  RecursionParams p;
  switch (lemma) {
    case RecursionLemma::kCase1: {
      p.b1 = uniform(rng, 0.5, 2.0);
      p.delta0 = uniform(rng, 0.1, 3.0);
      p.c1 = p.b1 * p.b1 * p.delta0 / ((1.0 + p.delta0) * (1.0 + p.delta0)) * (1.0 + uniform(rng, 0.01, 2.0));
      p.C = uniform(rng, 0.5, 5.0);
      p.eps_prime_sq = p.C * std::pow(10.0, -uniform(rng, 1.0, 6.0));
      break;
    }
    case RecursionLemma::kCase2: {
      p.c1 = uniform(rng, 0.5, 3.0);
      p.c2 = p.c1 * uniform(rng, 0.01, 0.99);
      p.C = uniform(rng, 0.5, 5.0);
      p.eps_prime_sq = p.C * std::pow(10.0, -uniform(rng, 0.3, 1.5));
      const double se = std::sqrt(std::sqrt(p.eps_prime_sq));
      p.b1 = std::sqrt(p.c1) * (se + 1.0 / se) * uniform(rng, 0.3, 1.0);
      break;
    }
    case RecursionLemma::kLemma6: {
      p.b1 = uniform(rng, 0.5, 2.0);
      p.c1 = uniform(rng, 0.5, 3.0);
      p.c2 = uniform(rng, 0.01, 1.0);
      p.c3 = uniform(rng, 0.01, 0.5);
      p.eps_prime_sq = (p.c3 / p.b1) * (1.0 + uniform(rng, 0.1, 2.0));
      p.C = p.eps_prime_sq * (1.0 + std::pow(10.0, uniform(rng, 0.0, 3.0)));
      p.gamma = std::max(1.0, lemma6_gamma_lower_bound(p.b1, p.c1, p.c2, p.c3, p.eps_prime_sq)) *
                (1.0 + uniform(rng, 0.05, 1.0));
      break;
    }
  }
  return p;
}

RecursionBound apply_lemma(RecursionLemma lemma, const RecursionParams& p) {
  switch (lemma) {
    case RecursionLemma::kCase1:
      return recurse_case1(p);
    case RecursionLemma::kCase2:
      return recurse_case2(p);
    case RecursionLemma::kLemma6:
      break;
  }
  return recurse2(p);
}

RecursionVerification verify_recursion(RecursionLemma lemma, std::size_t draws, std::uint64_t seed) {
  if (draws < 1) fail(ErrorCode::kInvalidArgument, "verify_recursion: draws must be >= 1");
  RecursionVerification v;
  v.lemma = lemma;
  v.draws = draws;
  v.outcomes.resize(draws);
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(lemma), 0x726563);
  for (std::size_t i = 0; i < draws; ++i) {
    auto& o = v.outcomes[i];
    o.index = i;
    o.params = draw_recursion_params(lemma, rng);
    o.bound = apply_lemma(lemma, o.params);
    o.params.eta_prime = o.bound.eta_prime;
    const UnrollResult u = unroll_worst_case(o.params, o.bound);
    o.final_delta = u.sequence.back();
    o.certified = u.certified;
    if (o.certified) ++v.certified;
    if (lemma == RecursionLemma::kLemma6) {
      o.floor_abs_err = std::abs(o.bound.floor - o.bound.beta / (1.0 - o.bound.alpha));
      v.max_floor_abs_err = std::max(v.max_floor_abs_err, o.floor_abs_err);
    }
  }
  return v;
}

}  // namespace tt
