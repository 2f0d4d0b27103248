// SPDX-License-Identifier: Apache-2.0
#include "trontrain/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "trontrain/error.hpp"

namespace tt {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGlmTron:
      return "glm_tron";
    case Algorithm::kReluTron:
      return "relu_tron";
    case Algorithm::kNeuroTron:
      return "neurotron";
    case Algorithm::kVerifyRecursion:
      return "verify_recursion";
  }
  return "relu_tron";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "glm_tron") return Algorithm::kGlmTron;
  if (name == "relu_tron") return Algorithm::kReluTron;
  if (name == "neurotron") return Algorithm::kNeuroTron;
  if (name == "verify_recursion") return Algorithm::kVerifyRecursion;
  fail(ErrorCode::kParse, "unknown algorithm '" + name + "' (expected glm_tron, relu_tron, neurotron, verify_recursion)");
}

InputDistribution DistributionSpec::build() const {
  if (kind == "uniform_box") return InputDistribution::uniform_box(low, high);
  if (kind == "isotropic_gaussian") return InputDistribution::isotropic_gaussian(n, sigma);
  if (kind == "unit_ball") return InputDistribution::unit_ball(n);
  if (kind == "unit_sphere") return InputDistribution::unit_sphere(n);
  fail(ErrorCode::kParse, "distribution: unknown kind '" + kind +
                              "' (expected uniform_box, isotropic_gaussian, unit_ball, unit_sphere)");
}

AttackProbability BetaSpec::build() const {
  if (kind == "constant") return AttackProbability::constant(p);
  if (kind == "indicator_halfspace") return AttackProbability::indicator_halfspace(v, p);
  fail(ErrorCode::kParse, "beta: unknown kind '" + kind + "' (expected constant, indicator_halfspace)");
}

namespace {

double parse_number(std::string_view s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(ErrorCode::kParse, what + ": bad number '" + std::string(s) + "'");
  return v;
}

RealVector parse_list(std::string_view s, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(parse_number(s.substr(start, end - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return RealVector(std::move(out));
}

}  // namespace

DistributionSpec DistributionSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  auto count = [&](const std::string& s) {
    const double v = parse_number(s, "distribution dimension");
    if (!(v >= 1.0) || v != std::floor(v)) fail(ErrorCode::kParse, "distribution: dimension must be a positive integer");
    return static_cast<std::size_t>(v);
  };
  DistributionSpec d;
  const std::string& kind = parts.front();
  if (kind == "box" && parts.size() == 4) {
    const std::size_t n = count(parts[3]);
    d.kind = "uniform_box";
    d.n = n;
    d.low = RealVector(n, parse_number(parts[1], "box low"));
    d.high = RealVector(n, parse_number(parts[2], "box high"));
  } else if (kind == "gaussian" && parts.size() == 3) {
    d.kind = "isotropic_gaussian";
    d.n = count(parts[1]);
    d.sigma = parse_number(parts[2], "gaussian sigma");
  } else if ((kind == "ball" || kind == "sphere") && parts.size() == 2) {
    d.kind = kind == "ball" ? "unit_ball" : "unit_sphere";
    d.n = count(parts[1]);
  } else {
    fail(ErrorCode::kParse, "distribution: bad spec '" + text + "' (expected box:LOW:HIGH:N, gaussian:N:SIGMA, ball:N or sphere:N)");
  }
  (void)d.build();
  return d;
}

BetaSpec BetaSpec::parse(const std::string& text) {
  BetaSpec b;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    b.p = parse_number(text, "beta");
    return b;
  }
  const std::string kind = text.substr(0, c1);
  const std::string rest = text.substr(c1 + 1);
  if (kind == "constant") {
    b.p = parse_number(rest, "beta");
    return b;
  }
  if (kind == "halfspace" || kind == "indicator_halfspace") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) fail(ErrorCode::kParse, "beta: expected halfspace:P:v1,v2,...");
    b.kind = "indicator_halfspace";
    b.p = parse_number(rest.substr(0, c2), "beta");
    b.v = parse_list(rest.substr(c2 + 1), "beta normal");
    return b;
  }
  fail(ErrorCode::kParse, "beta: unknown spec '" + text + "' (expected P, constant:P or halfspace:P:v1,...)");
}

OracleConfig OracleSpec::build(const InputDistribution& dist) const {
  if (perturbation == "realization") {
    double r = support_radius > 0.0 ? support_radius : dist.support_radius();
    if (!std::isfinite(r)) fail(ErrorCode::kHypothesis, "oracle: realization attack needs a bounded support radius");
    return make_realization_attack(w_star, w_adv, r);
  }
  OracleConfig o;
  o.w_star = w_star;
  o.theta_star = theta_star;
  o.beta = beta.build();
  o.perturbation = parse_perturbation(perturbation);
  o.validate();
  return o;
}

namespace {

// Reads one TOML table and rejects keys it was not asked about.
class Reader {
 public:
  Reader(const toml::table* t, std::string where) : t_(t), where_(std::move(where)) {}

  bool present() const { return t_ != nullptr; }
  bool has(const char* key) {
    seen_.insert(key);
    return t_ && t_->contains(key);
  }

  double real(const char* key, double def) {
    if (!has(key)) return def;
    const auto* node = t_->get(key);
    if (auto v = node->value<double>()) return *v;
    bad(key, "a number");
  }

  std::uint64_t integer(const char* key, std::uint64_t def) {
    if (!has(key)) return def;
    auto v = t_->get(key)->value<std::int64_t>();
    if (!v || *v < 0) bad(key, "a non-negative integer");
    return static_cast<std::uint64_t>(*v);
  }

  std::string string(const char* key, const std::string& def) {
    if (!has(key)) return def;
    auto v = t_->get(key)->value<std::string>();
    if (!v) bad(key, "a string");
    return *v;
  }

  bool boolean(const char* key, bool def) {
    if (!has(key)) return def;
    auto v = t_->get(key)->value<bool>();
    if (!v) bad(key, "a boolean");
    return *v;
  }

  RealVector vec(const char* key, const RealVector& def) {
    if (!has(key)) return def;
    const auto* arr = t_->get(key)->as_array();
    if (!arr || arr->empty()) bad(key, "a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& el : *arr) {
      auto v = el.value<double>();
      if (!v) bad(key, "an array of numbers");
      out.push_back(*v);
    }
    return RealVector(std::move(out));
  }

  Reader sub(const char* key) {
    seen_.insert(key);
    if (!t_ || !t_->contains(key)) return Reader(nullptr, where_ + key + ".");
    const auto* tbl = t_->get(key)->as_table();
    if (!tbl) fail(ErrorCode::kParse, "config: '" + where_ + key + "' must be a table");
    return Reader(tbl, where_ + key + ".");
  }

  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_) {
      const std::string key(k.str());
      if (!seen_.count(key)) fail(ErrorCode::kParse, "config: unknown key '" + where_ + key + "'");
    }
  }

 private:
  [[noreturn]] void bad(const char* key, const char* expected) const {
    fail(ErrorCode::kParse, "config: '" + where_ + key + "' must be " + expected);
  }

  const toml::table* t_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ':' << e.source().begin.line << ':' << e.source().begin.column << ": " << e.description();
    fail(ErrorCode::kParse, msg.str());
  }
  ExperimentConfig c;
  Reader top(&root, "");
  if (!top.has("algorithm")) fail(ErrorCode::kParse, "config: missing 'algorithm'");
  c.algorithm = parse_algorithm(top.string("algorithm", ""));
  c.seed = top.integer("seed", 0);
  c.repeats = top.integer("repeats", 1);
  c.eps = top.real("eps", c.eps);
  c.delta = top.real("delta", c.delta);

  Reader dist = top.sub("distribution");
  c.distribution.kind = dist.string("kind", c.distribution.kind);
  c.distribution.low = dist.vec("low", {});
  c.distribution.high = dist.vec("high", {});
  c.distribution.n = dist.integer("n", c.distribution.low.dim());
  c.distribution.sigma = dist.real("sigma", 1.0);
  dist.finish();

  Reader orc = top.sub("oracle");
  c.oracle.w_star = orc.vec("w_star", {});
  c.oracle.theta_star = orc.real("theta_star", 0.0);
  c.oracle.perturbation_defaulted = !orc.has("perturbation");
  c.oracle.perturbation = orc.string("perturbation", "uniform");
  c.oracle.w_adv = orc.vec("w_adv", {});
  c.oracle.support_radius = orc.real("support_radius", 0.0);
  Reader beta = orc.sub("beta");
  c.oracle.beta.kind = beta.string("kind", "constant");
  c.oracle.beta.p = beta.real("p", 0.0);
  c.oracle.beta.v = beta.vec("v", {});
  beta.finish();
  orc.finish();

  Reader rt = top.sub("relu_tron");
  c.relu_tron.which_case = rt.string("case", "auto");
  c.relu_tron.batch = rt.integer("batch", c.relu_tron.batch);
  c.relu_tron.delta0 = rt.real("delta0", c.relu_tron.delta0);
  c.relu_tron.mc_samples = rt.integer("mc_samples", c.relu_tron.mc_samples);
  c.relu_tron.K = rt.real("K", 0.0);
  c.relu_tron.gamma = rt.real("gamma", 0.0);
  c.relu_tron.w_init = rt.vec("w_init", {});
  c.relu_tron.steps = rt.integer("steps", 0);
  rt.finish();

  Reader gt = top.sub("glm_tron");
  c.glm_tron.activation = gt.string("activation", c.glm_tron.activation);
  c.glm_tron.leaky_alpha = gt.real("leaky_alpha", c.glm_tron.leaky_alpha);
  c.glm_tron.samples = gt.integer("samples", c.glm_tron.samples);
  c.glm_tron.w_star = gt.vec("w_star", {});
  c.glm_tron.noise = gt.string("noise", c.glm_tron.noise);
  c.glm_tron.noise_theta = gt.real("noise_theta", 0.0);
  c.glm_tron.max_iters = gt.integer("max_iters", c.glm_tron.max_iters);
  c.glm_tron.dataset = gt.string("dataset", "");
  gt.finish();

  Reader nt = top.sub("neurotron");
  c.neurotron.r = nt.integer("r", c.neurotron.r);
  c.neurotron.n = nt.integer("n", c.neurotron.n);
  c.neurotron.half_width = nt.integer("half_width", c.neurotron.half_width);
  c.neurotron.alpha = nt.real("alpha", c.neurotron.alpha);
  c.neurotron.wishart_dof = nt.integer("wishart_dof", c.neurotron.wishart_dof);
  c.neurotron.c_norm = nt.real("c_norm", c.neurotron.c_norm);
  c.neurotron.samples = nt.integer("samples", c.neurotron.samples);
  c.neurotron.noise_theta = nt.real("noise_theta", 0.0);
  c.neurotron.mu_factor = nt.real("mu_factor", c.neurotron.mu_factor);
  c.neurotron.gamma = nt.real("gamma", 0.0);
  c.neurotron.eta = nt.real("eta", 0.0);
  c.neurotron.max_iters = nt.integer("max_iters", 0);
  nt.finish();

  Reader vr = top.sub("verify_recursion");
  c.verify_recursion.lemma = vr.string("lemma", c.verify_recursion.lemma);
  c.verify_recursion.draws = vr.integer("draws", c.verify_recursion.draws);
  vr.finish();

  Reader as = top.sub("assertions");
  if (as.has("min_success_rate")) c.assertions.min_success_rate = as.real("min_success_rate", 0.0);
  if (as.has("max_final_error")) c.assertions.max_final_error = as.real("max_final_error", 0.0);
  if (as.has("max_effective_erm")) c.assertions.max_effective_erm = as.real("max_effective_erm", 0.0);
  c.assertions.require_all_certified = as.boolean("require_all_certified", true);
  as.finish();
  top.finish();

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void ExperimentConfig::validate() const {
  if (repeats < 1) fail(ErrorCode::kInvalidArgument, "config: repeats must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::kInvalidArgument, "config: eps must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) fail(ErrorCode::kInvalidArgument, "config: delta must be in (0, 1]");
  switch (algorithm) {
    case Algorithm::kReluTron: {
      const InputDistribution d = distribution.build();
      if (oracle.w_star.dim() != d.dim()) {
        fail(ErrorCode::kDimensionMismatch, "config: oracle.w_star dimension differs from the distribution");
      }
      (void)oracle.build(d);
      if (relu_tron.batch < 1) fail(ErrorCode::kInvalidArgument, "config: relu_tron.batch must be >= 1");
      if (relu_tron.mc_samples < 1000) fail(ErrorCode::kInvalidArgument, "config: relu_tron.mc_samples must be >= 1000");
      if (relu_tron.which_case != "auto" && relu_tron.which_case != "I" && relu_tron.which_case != "II") {
        fail(ErrorCode::kParse, "config: relu_tron.case must be auto, I or II");
      }
      if (!relu_tron.w_init.empty() && relu_tron.w_init.dim() != d.dim()) {
        fail(ErrorCode::kDimensionMismatch, "config: relu_tron.w_init dimension differs from the distribution");
      }
      break;
    }
    case Algorithm::kGlmTron: {
      if (glm_tron.dataset.empty()) {
        const InputDistribution d = distribution.build();
        if (glm_tron.w_star.dim() != d.dim()) {
          fail(ErrorCode::kDimensionMismatch, "config: glm_tron.w_star dimension differs from the distribution");
        }
        if (glm_tron.samples < 1) fail(ErrorCode::kInvalidArgument, "config: glm_tron.samples must be >= 1");
      }
      if (glm_tron.noise != "none" && glm_tron.noise != "uniform") {
        fail(ErrorCode::kParse, "config: glm_tron.noise must be none or uniform");
      }
      if (!(glm_tron.noise_theta >= 0.0)) fail(ErrorCode::kInvalidArgument, "config: glm_tron.noise_theta must be >= 0");
      break;
    }
    case Algorithm::kNeuroTron: {
      const auto& n = neurotron;
      if (n.r < 1 || n.r > n.n) fail(ErrorCode::kInvalidArgument, "config: neurotron needs 1 <= r <= n");
      if (n.wishart_dof < n.r) fail(ErrorCode::kInvalidArgument, "config: neurotron.wishart_dof must be >= r");
      if (n.half_width < 1 || n.samples < 1) fail(ErrorCode::kInvalidArgument, "config: neurotron half_width and samples must be >= 1");
      if (!(n.alpha >= 0.0 && n.alpha <= 1.0)) fail(ErrorCode::kInvalidArgument, "config: neurotron.alpha must be in [0, 1]");
      if (!(n.noise_theta >= 0.0)) fail(ErrorCode::kInvalidArgument, "config: neurotron.noise_theta must be >= 0");
      break;
    }
    case Algorithm::kVerifyRecursion:
      if (verify_recursion.lemma != "recurse1" && verify_recursion.lemma != "recurse2" &&
          verify_recursion.lemma != "recurse2lemma6") {
        fail(ErrorCode::kParse, "config: verify_recursion.lemma must be recurse1, recurse2 or recurse2lemma6");
      }
      if (verify_recursion.draws < 1) fail(ErrorCode::kInvalidArgument, "config: verify_recursion.draws must be >= 1");
      break;
  }
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.theta_star) cfg.oracle.theta_star = *o.theta_star;
  if (o.beta) cfg.oracle.beta = BetaSpec::parse(*o.beta);
  if (o.batch) cfg.relu_tron.batch = *o.batch;
  if (o.eps) cfg.eps = *o.eps;
  if (o.delta) cfg.delta = *o.delta;
  if (o.repeats) cfg.repeats = *o.repeats;
  cfg.validate();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace tt
