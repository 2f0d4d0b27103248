// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tt {

// Inputs to the three recursion lemmas. Which fields matter depends on the
// lemma; each entry point validates its own hypotheses.
struct RecursionParams {
  double b1 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double eta_prime = 0.0;  // output of the lemma, ignored on input
  double C = 0.0;          // Delta_1
  double eps_prime_sq = 0.0;
  double gamma = 0.0;   // recurse2lemma6 only
  double delta0 = 0.0;  // Case 1 only
};

enum class RecursionLemma { kCase1, kCase2, kLemma6 };

// CLI names: recurse1, recurse2, recurse2lemma6.
std::string lemma_cli_name(RecursionLemma l);
RecursionLemma parse_lemma(const std::string& name);

struct Hypothesis {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs of the strict/weak inequality; > 0 is slack
};

// Delta_{t+1} = alpha Delta_t + beta is the equality recursion the lemma covers.
struct RecursionBound {
  RecursionLemma lemma = RecursionLemma::kCase1;
  double eta_prime = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double floor = 0.0;  // beta / (1 - alpha) at the prescribed eta'
  std::int64_t predicted_T = 1;
  std::vector<Hypothesis> hypotheses;

  bool all_satisfied() const;
};

// Pure contraction, c2 == 0: eta' = b1 / ((1+delta0) c1).
RecursionBound recurse_case1(const RecursionParams& p);
// Quadratic noise, 0 < c2 <= c1: eta' = (b1/c1) eps'^2/(1+eps'^2).
RecursionBound recurse_case2(const RecursionParams& p);
// Additive noise: eta' = b1/(gamma c1), beta = eta'^2 c2 + eta' c3.
RecursionBound recurse2(const RecursionParams& p);
// Additive-noise engine that also admits c2 == c3 == 0 (zero floor). Used by
// schedules whose noise terms vanish at theta == 0.
RecursionBound recurse2_allow_noiseless(const RecursionParams& p);

// Lower bound that gamma must strictly exceed in the additive-noise recursion.
double lemma6_gamma_lower_bound(double b1, double c1, double c2, double c3, double eps_prime_sq);
// (c2/c1 + gamma c3/b1) / (gamma - 1).
double lemma6_floor(double b1, double c1, double c2, double c3, double gamma);

struct UnrollResult {
  std::vector<double> sequence;  // Delta_1 .. Delta_T
  bool certified = false;        // Delta_T <= eps'^2 + 1e-12
};

// Iterates the recursion at equality from Delta_1 = C.
UnrollResult unroll_worst_case(const RecursionParams& p, const RecursionBound& bound);

inline constexpr double kUnrollSlack = 1e-12;

}  // namespace tt
