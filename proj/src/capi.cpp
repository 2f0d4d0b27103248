// SPDX-License-Identifier: Apache-2.0
#include "trontrain/trontrain.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "trontrain/acceptance.hpp"
#include "trontrain/config.hpp"
#include "trontrain/data_model.hpp"
#include "trontrain/distributions.hpp"
#include "trontrain/error.hpp"
#include "trontrain/experiment.hpp"
#include "trontrain/serialization.hpp"

struct tt_dataset {
  tt::Dataset d;
};
struct tt_distribution {
  tt::InputDistribution d;
};
struct tt_moments {
  tt::MomentEstimates m;
};

namespace {

thread_local std::string g_last_error;

static_assert(static_cast<int>(tt::ErrorCode::kTargetBelowFloor) == TT_TARGET_BELOW_FLOOR);
static_assert(static_cast<int>(tt::ErrorCode::kInvalidArgument) == TT_INVALID_ARGUMENT);

// Runs fn, mapping exceptions to status codes and recording the message.
template <typename Fn>
tt_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TT_OK;
  } catch (const tt::Error& e) {
    g_last_error = e.what();
    return static_cast<tt_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("json: ") + e.what();
    return TT_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TT_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TT_INTERNAL;
  }
}

void require_ptr(const void* p, const char* what) {
  if (p == nullptr) tt::fail(tt::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tt::Json result_json(const tt::CriterionResult& r) {
  return {{"id", r.id}, {"pass", r.pass}, {"measured", r.measured}, {"tolerance", r.tolerance}, {"detail", r.detail}};
}

}  // namespace

extern "C" {

const char* tt_last_error(void) { return g_last_error.c_str(); }

const char* tt_status_name(tt_status s) {
  switch (s) {
    case TT_OK: return "ok";
    case TT_INVALID_ARGUMENT: return "invalid_argument";
    case TT_DIMENSION_MISMATCH: return "dimension_mismatch";
    case TT_EMPTY_INPUT: return "empty_input";
    case TT_HYPOTHESIS: return "hypothesis";
    case TT_NUMERIC: return "numeric";
    case TT_IO: return "io";
    case TT_PARSE: return "parse";
    case TT_ALREADY_CONVERGED: return "already_converged";
    case TT_TARGET_BELOW_FLOOR: return "target_below_floor";
    case TT_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tt_version(void) { return "1.0.0"; }

void tt_string_free(char* s) { std::free(s); }

tt_status tt_dataset_create(const double* x, const double* y, size_t count, size_t dim, tt_dataset** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = nullptr;
    if (count == 0) tt::fail(tt::ErrorCode::kEmptyInput, "tt_dataset_create: count must be >= 1");
    if (dim == 0) tt::fail(tt::ErrorCode::kInvalidArgument, "tt_dataset_create: dim must be >= 1");
    require_ptr(x, "x");
    require_ptr(y, "y");
    auto h = std::make_unique<tt_dataset>();
    for (size_t i = 0; i < count; ++i) {
      h->d.push_back({tt::RealVector(std::vector<double>(x + i * dim, x + (i + 1) * dim)), y[i]});
    }
    *out = h.release();
  });
}

tt_status tt_dataset_load_csv(const char* path, tt_dataset** out) {
  return guarded([&] {
    require_ptr(out, "out");
    require_ptr(path, "path");
    *out = nullptr;
    *out = new tt_dataset{tt::load_dataset_csv(path)};
  });
}

tt_status tt_dataset_save_csv(const tt_dataset* d, const char* path) {
  return guarded([&] {
    require_ptr(d, "dataset");
    require_ptr(path, "path");
    tt::save_dataset_csv(d->d, path);
  });
}

size_t tt_dataset_size(const tt_dataset* d) { return d ? d->d.size() : 0; }
size_t tt_dataset_dim(const tt_dataset* d) { return d ? d->d.dim() : 0; }

tt_status tt_dataset_symmetrize(const tt_dataset* d, tt_dataset** out) {
  return guarded([&] {
    require_ptr(d, "dataset");
    require_ptr(out, "out");
    *out = nullptr;
    *out = new tt_dataset{tt::symmetrize(d->d)};
  });
}

int tt_dataset_is_symmetric(const tt_dataset* d) { return d && tt::is_symmetric(d->d) ? 1 : 0; }

void tt_dataset_free(tt_dataset* d) { delete d; }

tt_status tt_distribution_parse(const char* spec, tt_distribution** out) {
  return guarded([&] {
    require_ptr(spec, "spec");
    require_ptr(out, "out");
    *out = nullptr;
    *out = new tt_distribution{tt::DistributionSpec::parse(spec).build()};
  });
}

size_t tt_distribution_dim(const tt_distribution* d) { return d ? d->d.dim() : 0; }

void tt_distribution_free(tt_distribution* d) { delete d; }

tt_status tt_moments_estimate(const tt_distribution* dist, const double* w_star, size_t dim, double theta_star,
                              const char* beta_spec, size_t mc_samples, uint64_t seed, tt_moments** out) {
  return guarded([&] {
    require_ptr(dist, "distribution");
    require_ptr(w_star, "w_star");
    require_ptr(out, "out");
    *out = nullptr;
    const tt::RealVector w(std::vector<double>(w_star, w_star + dim));
    const tt::AttackProbability beta =
        beta_spec ? tt::BetaSpec::parse(beta_spec).build() : tt::AttackProbability::constant(0.0);
    *out = new tt_moments{tt::estimate_moments(dist->d, w, theta_star, beta, mc_samples, seed)};
  });
}

tt_status tt_moments_to_json(const tt_moments* m, char** json) {
  return guarded([&] {
    require_ptr(m, "moments");
    require_ptr(json, "json");
    *json = nullptr;
    tt::Json j = tt::moments_to_json(m->m);
    j["std_err"] = tt::moments_std_err_to_json(m->m);
    j["provenance"] = m->m.provenance == tt::Provenance::kAnalytic ? "analytic" : "monte_carlo";
    *json = dup_string(j.dump(2));
  });
}

tt_status tt_moments_get(const tt_moments* m, const char* name, double* value) {
  return guarded([&] {
    require_ptr(m, "moments");
    require_ptr(name, "name");
    require_ptr(value, "value");
    const tt::Json j = tt::moments_to_json(m->m);
    const std::string key(name);
    if (key == "n_samples" || !j.contains(key)) {
      tt::fail(tt::ErrorCode::kInvalidArgument, "tt_moments_get: unknown constant '" + key + "'");
    }
    *value = j.at(key).get<double>();
  });
}

void tt_moments_free(tt_moments* m) { delete m; }

tt_status tt_run_experiment(const char* config_path, const char* overrides_json, const char* out_dir, int dry_run,
                            char** summary_json, int* passed) {
  return guarded([&] {
    require_ptr(config_path, "config_path");
    if (summary_json) *summary_json = nullptr;
    if (passed) *passed = 0;
    tt::ExperimentConfig cfg = tt::load_config(config_path);
    if (overrides_json && *overrides_json) {
      const tt::Json j = tt::Json::parse(overrides_json);
      if (!j.is_object()) tt::fail(tt::ErrorCode::kParse, "overrides must be a JSON object");
      tt::ConfigOverrides o;
      for (const auto& [k, v] : j.items()) {
        if (k == "seed") o.seed = v.get<std::uint64_t>();
        else if (k == "theta_star") o.theta_star = v.get<double>();
        else if (k == "beta") o.beta = v.is_string() ? v.get<std::string>() : std::to_string(v.get<double>());
        else if (k == "batch") o.batch = v.get<std::size_t>();
        else if (k == "eps") o.eps = v.get<double>();
        else if (k == "delta") o.delta = v.get<double>();
        else if (k == "repeats") o.repeats = v.get<std::size_t>();
        else tt::fail(tt::ErrorCode::kParse, "overrides: unknown key '" + k + "'");
      }
      tt::apply_overrides(cfg, o);
    }
    tt::RunOptions opts;
    opts.out_dir = out_dir ? out_dir : "";
    opts.dry_run = dry_run != 0;
    const tt::RunResult res = tt::run_experiment(cfg, opts);
    if (passed) *passed = res.assertions_passed ? 1 : 0;
    if (summary_json) *summary_json = dup_string(res.summary.dump(2));
  });
}

tt_status tt_acceptance_list(char** ids) {
  return guarded([&] {
    require_ptr(ids, "ids");
    std::string s;
    for (const auto& id : tt::criterion_ids()) s += (s.empty() ? "" : " ") + id;
    *ids = dup_string(s);
  });
}

tt_status tt_acceptance_run(const char* id, uint64_t seed, double tolerance_scale, char** report_json,
                            int* all_passed) {
  return guarded([&] {
    if (report_json) *report_json = nullptr;
    tt::AcceptanceOptions opts;
    opts.seed = seed;
    opts.tolerance_scale = tolerance_scale;
    std::vector<tt::CriterionResult> results;
    if (id && *id) results.push_back(tt::run_criterion(id, opts));
    else results = tt::run_acceptance(opts);
    tt::Json arr = tt::Json::array();
    bool ok = true;
    for (const auto& r : results) {
      arr.push_back(result_json(r));
      ok = ok && r.pass;
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (report_json) *report_json = dup_string(arr.dump(2));
  });
}

tt_status tt_verify_recursion(const char* lemma, size_t draws, uint64_t seed, char** report_json, int* all_certified) {
  return guarded([&] {
    require_ptr(lemma, "lemma");
    if (report_json) *report_json = nullptr;
    const tt::RecursionVerification v = tt::verify_recursion(tt::parse_lemma(lemma), draws, seed);
    tt::Json rows = tt::Json::array();
    for (const auto& o : v.outcomes) {
      rows.push_back({{"draw", o.index},
                      {"predicted_T", o.bound.predicted_T},
                      {"alpha", o.bound.alpha},
                      {"beta", o.bound.beta},
                      {"eps_prime_sq", o.params.eps_prime_sq},
                      {"final_delta", o.final_delta},
                      {"certified", o.certified}});
    }
    tt::Json j{{"lemma", tt::lemma_cli_name(v.lemma)}, {"draws", v.draws}, {"certified", v.certified}, {"rows", rows}};
    if (v.lemma == tt::RecursionLemma::kLemma6) j["max_floor_abs_err"] = v.max_floor_abs_err;
    if (all_certified) *all_certified = v.all_certified() ? 1 : 0;
    if (report_json) *report_json = dup_string(j.dump(2));
  });
}

}  // extern "C"
