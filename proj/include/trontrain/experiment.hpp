// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trontrain/config.hpp"
#include "trontrain/recursion_bounds.hpp"
#include "trontrain/rng.hpp"
#include "trontrain/serialization.hpp"

namespace tt {

struct RunOptions {
  std::string out_dir;   // empty: write nothing
  bool dry_run = false;  // schedule only, no training, no files
};

struct RunResult {
  int exit_code = 0;  // 0 iff every configured assertion passed
  bool assertions_passed = true;
  Json summary;
};

// Deterministic in (cfg, seed): summary.json carries no timestamps or paths.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

// Hex FNV-1a of the canonical JSON dump of the effective config.
std::string config_hash(const ExperimentConfig& cfg);

// One hypothesis-satisfying parameter set per call.
RecursionParams draw_recursion_params(RecursionLemma lemma, Rng& rng);
RecursionBound apply_lemma(RecursionLemma lemma, const RecursionParams& p);

struct RecursionDrawOutcome {
  std::size_t index = 0;
  RecursionParams params;
  RecursionBound bound;
  double final_delta = 0.0;
  bool certified = false;
  double floor_abs_err = 0.0;  // |floor - beta/(1-alpha)|, recurse2lemma6 only
};

struct RecursionVerification {
  RecursionLemma lemma = RecursionLemma::kCase1;
  std::size_t draws = 0;
  std::size_t certified = 0;
  double max_floor_abs_err = 0.0;
  std::vector<RecursionDrawOutcome> outcomes;

  bool all_certified() const { return certified == draws; }
};

inline constexpr double kFloorIdentityTolerance = 1e-10;

RecursionVerification verify_recursion(RecursionLemma lemma, std::size_t draws, std::uint64_t seed);

}  // namespace tt
