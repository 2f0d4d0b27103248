// SPDX-License-Identifier: Apache-2.0
#include "trontrain/serialization.hpp"

#include <cmath>

#include "trontrain/error.hpp"

namespace tt {

Json to_json(const RealVector& v) { return Json(v.entries()); }

Json to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealVector vector_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::kParse, "json: expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) fail(ErrorCode::kParse, "json: expected an array of numbers");
    out.push_back(e.get<double>());
  }
  RealVector v(std::move(out));
  v.validate("json vector");
  return v;
}

RealMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::kParse, "json: expected a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  std::vector<double> data;
  for (const auto& row : j) {
    const RealVector r = vector_from_json(row);
    if (r.dim() != cols) fail(ErrorCode::kParse, "json: ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return RealMatrix(rows, cols, std::move(data));
}

Json moments_to_json(const MomentEstimates& m) {
  return Json{{"a1", m.a1},       {"a2", m.a2},       {"a3", m.a3},
              {"a4", m.a4},       {"beta1", m.beta1}, {"beta2", m.beta2},
              {"beta3", m.beta3}, {"lambda1_theta", m.lambda1_theta}, {"theta_star", m.theta_star},
              {"n_samples", m.n_samples}};
}

MomentEstimates moments_from_json(const Json& j) {
  MomentEstimates m;
  try {
    m.a1 = j.at("a1").get<double>();
    m.a2 = j.at("a2").get<double>();
    m.a3 = j.at("a3").get<double>();
    m.a4 = j.at("a4").get<double>();
    m.beta1 = j.at("beta1").get<double>();
    m.beta2 = j.at("beta2").get<double>();
    m.beta3 = j.at("beta3").get<double>();
    m.lambda1_theta = j.at("lambda1_theta").get<double>();
    m.theta_star = j.at("theta_star").get<double>();
    m.n_samples = j.at("n_samples").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, std::string("moments json: ") + e.what());
  }
  return m;
}

Json moments_std_err_to_json(const MomentEstimates& m) {
  const auto& s = m.std_err;
  return Json{{"a1", s.a1},       {"a2", s.a2},       {"a3", s.a3},       {"a4", s.a4},
              {"beta1", s.beta1}, {"beta2", s.beta2}, {"beta3", s.beta3}, {"lambda1_theta", s.lambda1_theta}};
}

Json oracle_to_json(const OracleConfig& o) {
  Json beta;
  switch (o.beta.kind()) {
    case AttackProbability::Kind::kConstant:
      beta = {{"kind", "constant"}, {"p", o.beta.p()}};
      break;
    case AttackProbability::Kind::kIndicatorHalfspace:
      beta = {{"kind", "indicator_halfspace"}, {"p", o.beta.p()}, {"v", to_json(o.beta.v())}};
      break;
    case AttackProbability::Kind::kCustom:
      fail(ErrorCode::kInvalidArgument, "oracle json: custom beta functions are not serializable");
  }
  Json j{{"w_star", to_json(o.w_star)},
         {"theta_star", o.theta_star},
         {"beta", beta},
         {"perturbation", perturbation_name(o.perturbation)}};
  if (o.perturbation == PerturbationKind::kRealization) {
    j["w_adv"] = to_json(o.w_adv);
    j["support_radius"] = o.support_radius;
  }
  return j;
}

OracleConfig oracle_from_json(const Json& j) {
  try {
    OracleConfig o;
    o.w_star = vector_from_json(j.at("w_star"));
    o.perturbation = parse_perturbation(j.at("perturbation").get<std::string>());
    if (o.perturbation == PerturbationKind::kRealization) {
      return make_realization_attack(o.w_star, vector_from_json(j.at("w_adv")), j.at("support_radius").get<double>());
    }
    o.theta_star = j.at("theta_star").get<double>();
    const Json& b = j.at("beta");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "constant") {
      o.beta = AttackProbability::constant(b.at("p").get<double>());
    } else if (kind == "indicator_halfspace") {
      o.beta = AttackProbability::indicator_halfspace(vector_from_json(b.at("v")), b.at("p").get<double>());
    } else {
      fail(ErrorCode::kParse, "oracle json: unknown beta kind '" + kind + "'");
    }
    o.validate();
    return o;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, std::string("oracle json: ") + e.what());
  }
}

Json net_class_to_json(const NetClass& nc) {
  Json patches = Json::array();
  for (const auto& A : nc.patches) patches.push_back(to_json(A));
  return Json{{"width", nc.width()}, {"alpha", nc.alpha}, {"patches", patches}};
}

NetClass net_class_from_json(const Json& j) {
  try {
    NetClass nc;
    nc.alpha = j.at("alpha").get<double>();
    for (const auto& p : j.at("patches")) nc.patches.push_back(matrix_from_json(p));
    if (j.at("width").get<std::size_t>() != nc.patches.size()) {
      fail(ErrorCode::kParse, "net class json: width differs from the number of patches");
    }
    nc.validate();
    return nc;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, std::string("net class json: ") + e.what());
  }
}

Json recursion_bound_to_json(const RecursionBound& b) {
  Json hyps = Json::array();
  for (const auto& h : b.hypotheses) hyps.push_back({{"name", h.name}, {"satisfied", h.satisfied}, {"margin", h.margin}});
  return Json{{"lemma", lemma_cli_name(b.lemma)}, {"eta_prime", b.eta_prime}, {"alpha", b.alpha}, {"beta", b.beta},
              {"floor", b.floor},          {"predicted_T", b.predicted_T}, {"hypotheses", hyps}};
}

Json case_constants_to_json(const CaseConstants& c) {
  return Json{{"case", case_name(c.which)},
              {"batch", c.batch},
              {"b1p", c.b1p},
              {"c1p", c.c1p},
              {"c2p", c.c2p},
              {"c2p_stated", std::isfinite(c.c2p_stated) ? Json(c.c2p_stated) : Json(nullptr)},
              {"c3p", c.c3p},
              {"c2", c.c2},
              {"c3", c.c3},
              {"gamma", c.gamma},
              {"K", c.K},
              {"delta0", c.delta0},
              {"eta", c.eta},
              {"alpha_rate", c.alpha_rate},
              {"predicted_floor", c.predicted_floor},
              {"predicted_T", c.predicted_T},
              {"eps", c.eps},
              {"delta", c.delta},
              {"w_err0", c.w_err0},
              {"target_eps2_delta", c.target},
              {"recursion", recursion_bound_to_json(c.bound)}};
}

Json neuro_schedule_to_json(const NeuroTronSchedule& s) {
  auto finite = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json{{"lambda1", s.lambda1},
              {"B", s.B},
              {"M_norm", s.M_norm},
              {"a1", s.a1},
              {"a2", s.a2},
              {"a3", s.a3},
              {"a4", s.a4},
              {"a5", s.a5},
              {"theta", s.theta},
              {"mu", s.mu},
              {"gamma", s.gamma},
              {"gamma_lower", s.gamma_lower},
              {"eta", s.eta},
              {"alpha_rate", s.alpha_rate},
              {"b1", s.b1},
              {"c1", s.c1},
              {"c2", s.c2},
              {"c3", s.c3},
              {"predicted_floor", s.predicted_floor},
              {"gamma_star_remark", finite(s.gamma_star_remark)},
              {"floor_displayed", finite(s.floor_displayed)},
              {"eps", s.eps},
              {"w_err0", s.w_err0},
              {"predicted_T", s.predicted_T},
              {"M", to_json(s.M)}};
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["algorithm"] = algorithm_name(c.algorithm);
  j["seed"] = c.seed;
  j["repeats"] = c.repeats;
  j["eps"] = c.eps;
  j["delta"] = c.delta;
  const auto& d = c.distribution;
  j["distribution"] = {{"kind", d.kind}, {"low", to_json(d.low)}, {"high", to_json(d.high)}, {"n", d.n}, {"sigma", d.sigma}};
  const auto& o = c.oracle;
  j["oracle"] = {{"w_star", to_json(o.w_star)},
                 {"theta_star", o.theta_star},
                 {"beta", {{"kind", o.beta.kind}, {"p", o.beta.p}, {"v", to_json(o.beta.v)}}},
                 {"perturbation", o.perturbation},
                 {"perturbation_defaulted", o.perturbation_defaulted},
                 {"w_adv", to_json(o.w_adv)},
                 {"support_radius", o.support_radius}};
  const auto& r = c.relu_tron;
  j["relu_tron"] = {{"case", r.which_case}, {"batch", r.batch}, {"delta0", r.delta0}, {"mc_samples", r.mc_samples},
                    {"K", r.K},             {"gamma", r.gamma}, {"w_init", to_json(r.w_init)}, {"steps", r.steps}};
  const auto& g = c.glm_tron;
  j["glm_tron"] = {{"activation", g.activation}, {"leaky_alpha", g.leaky_alpha}, {"samples", g.samples},
                   {"w_star", to_json(g.w_star)}, {"noise", g.noise}, {"noise_theta", g.noise_theta},
                   {"max_iters", g.max_iters}, {"dataset", g.dataset}};
  const auto& n = c.neurotron;
  j["neurotron"] = {{"r", n.r},
                    {"n", n.n},
                    {"half_width", n.half_width},
                    {"alpha", n.alpha},
                    {"wishart_dof", n.wishart_dof},
                    {"c_norm", n.c_norm},
                    {"samples", n.samples},
                    {"noise_theta", n.noise_theta},
                    {"mu_factor", n.mu_factor},
                    {"gamma", n.gamma},
                    {"eta", n.eta},
                    {"max_iters", n.max_iters}};
  j["verify_recursion"] = {{"lemma", c.verify_recursion.lemma}, {"draws", c.verify_recursion.draws}};
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  j["assertions"] = {{"min_success_rate", opt(c.assertions.min_success_rate)},
                     {"max_final_error", opt(c.assertions.max_final_error)},
                     {"max_effective_erm", opt(c.assertions.max_effective_erm)},
                     {"require_all_certified", c.assertions.require_all_certified}};
  return j;
}

}  // namespace tt
