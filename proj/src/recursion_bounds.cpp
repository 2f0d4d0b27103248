// SPDX-License-Identifier: Apache-2.0
#include "trontrain/recursion_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trontrain/error.hpp"

namespace tt {

std::string lemma_cli_name(RecursionLemma l) {
  switch (l) {
    case RecursionLemma::kCase1:
      return "recurse1";
    case RecursionLemma::kCase2:
      return "recurse2";
    case RecursionLemma::kLemma6:
      return "recurse2lemma6";
  }
  return "recurse1";
}

RecursionLemma parse_lemma(const std::string& name) {
  if (name == "recurse1") return RecursionLemma::kCase1;
  if (name == "recurse2") return RecursionLemma::kCase2;
  if (name == "recurse2lemma6") return RecursionLemma::kLemma6;
  fail(ErrorCode::kInvalidArgument, "unknown lemma '" + name + "' (expected recurse1, recurse2, recurse2lemma6)");
}

bool RecursionBound::all_satisfied() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.satisfied; });
}

namespace {

Hypothesis strict(std::string name, double lhs, double rhs) { return {std::move(name), lhs > rhs, lhs - rhs}; }
Hypothesis weak(std::string name, double lhs, double rhs) { return {std::move(name), lhs >= rhs, lhs - rhs}; }

void require_finite(const RecursionParams& p, const char* lemma) {
  for (double v : {p.b1, p.c1, p.c2, p.c3, p.C, p.eps_prime_sq, p.gamma, p.delta0}) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, std::string(lemma) + ": non-finite parameter");
  }
}

void throw_if_violated(const RecursionBound& b, const char* lemma, ErrorCode code = ErrorCode::kHypothesis) {
  std::ostringstream msg;
  bool any = false;
  for (const auto& h : b.hypotheses) {
    if (h.satisfied) continue;
    msg << (any ? "; " : "") << h.name << " violated (margin " << h.margin << ")";
    any = true;
  }
  if (any) fail(code, std::string(lemma) + ": " + msg.str());
}

// Smallest T >= 1 with alpha^{T-1} <= ratio, ratio in (0, 1].
std::int64_t steps_for_ratio(double alpha, double ratio) {
  if (ratio >= 1.0) return 1;
  if (alpha <= 0.0) return 2;
  const double k = std::ceil(std::log(ratio) / std::log(alpha));
  if (!std::isfinite(k) || k > 9.0e15) fail(ErrorCode::kNumeric, "predicted T overflows");
  return 1 + static_cast<std::int64_t>(std::max(0.0, k));
}

}  // namespace

RecursionBound recurse_case1(const RecursionParams& p) {
  require_finite(p, "recurse_case1");
  RecursionBound b;
  b.lemma = RecursionLemma::kCase1;
  const double d0 = p.delta0;
  b.hypotheses = {
      {"c2 == 0", p.c2 == 0.0, -std::abs(p.c2)},
      strict("C > 0", p.C, 0.0),
      strict("b1 > 0", p.b1, 0.0),
      strict("delta0 > 0", d0, 0.0),
      strict("eps'^2 > 0", p.eps_prime_sq, 0.0),
      strict("c1 > b1^2*delta0/(1+delta0)^2", p.c1, p.b1 * p.b1 * d0 / ((1.0 + d0) * (1.0 + d0))),
  };
  throw_if_violated(b, "recurse_case1");
  b.eta_prime = p.b1 / ((1.0 + d0) * p.c1);
  b.alpha = 1.0 - b.eta_prime * p.b1 + b.eta_prime * b.eta_prime * p.c1;
  b.beta = 0.0;
  b.floor = 0.0;
  b.predicted_T = p.C <= p.eps_prime_sq ? 1 : steps_for_ratio(b.alpha, p.eps_prime_sq / p.C);
  return b;
}

RecursionBound recurse_case2(const RecursionParams& p) {
  require_finite(p, "recurse_case2");
  RecursionBound b;
  b.lemma = RecursionLemma::kCase2;
  const double e2 = p.eps_prime_sq;
  const double e = std::sqrt(std::max(e2, 0.0));
  const double se = std::sqrt(e);
  const double ratio_cap = e > 0.0 ? (se + 1.0 / se) * (se + 1.0 / se) : std::numeric_limits<double>::infinity();
  b.hypotheses = {
      strict("b1 > 0", p.b1, 0.0),
      strict("c2 > 0", p.c2, 0.0),
      weak("c2 <= c1", p.c1, p.c2),
      strict("eps'^2 > 0", e2, 0.0),
      weak("eps'^2 <= C", p.C, e2),
      weak("b1^2/c1 <= (sqrt(eps') + 1/sqrt(eps'))^2", ratio_cap, p.c1 > 0.0 ? p.b1 * p.b1 / p.c1 : INFINITY),
  };
  throw_if_violated(b, "recurse_case2");
  if (p.c2 == p.c1 && e2 < p.C) {
    fail(ErrorCode::kTargetBelowFloor, "recurse_case2: target equals asymptote (c2 == c1 puts the floor at eps'^2)");
  }
  const double s = e2 / (1.0 + e2);
  b.eta_prime = (p.b1 / p.c1) * s;
  b.alpha = 1.0 - (p.b1 * p.b1 / p.c1) * e2 / ((1.0 + e2) * (1.0 + e2));
  b.beta = b.eta_prime * b.eta_prime * p.c2;
  b.floor = (p.c2 / p.c1) * e2;
  if (e2 >= p.C) {
    b.predicted_T = 1;
  } else {
    const double ratio = e2 * (p.c1 - p.c2) / (p.C * p.c1 - p.c2 * e2);
    b.predicted_T = steps_for_ratio(b.alpha, ratio);
  }
  return b;
}

double lemma6_gamma_lower_bound(double b1, double c1, double c2, double c3, double eps_prime_sq) {
  const double denom = eps_prime_sq - c3 / b1;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(b1 * b1 / c1, (eps_prime_sq + c2 / c1) / denom);
}

double lemma6_floor(double b1, double c1, double c2, double c3, double gamma) {
  return (c2 / c1 + gamma * c3 / b1) / (gamma - 1.0);
}

namespace {

RecursionBound lemma6_impl(const RecursionParams& p, bool allow_noiseless) {
  const char* who = allow_noiseless ? "recurse2 (noiseless allowed)" : "recurse2";
  require_finite(p, who);
  RecursionBound b;
  b.lemma = RecursionLemma::kLemma6;
  const double floor_min = p.b1 > 0.0 ? p.c3 / p.b1 : INFINITY;
  if (allow_noiseless) {
    b.hypotheses = {strict("b1 > 0", p.b1, 0.0), strict("c1 > 0", p.c1, 0.0), weak("c2 >= 0", p.c2, 0.0),
                    weak("c3 >= 0", p.c3, 0.0)};
  } else {
    b.hypotheses = {strict("b1 > 0", p.b1, 0.0), strict("c1 > 0", p.c1, 0.0), strict("c2 > 0", p.c2, 0.0),
                    strict("c3 > 0", p.c3, 0.0)};
  }
  b.hypotheses.push_back(strict("Delta_1 > c3/b1", p.C, floor_min));
  b.hypotheses.push_back(strict("eps'^2 > c3/b1", p.eps_prime_sq, floor_min));
  b.hypotheses.push_back(strict("eps'^2 < Delta_1", p.C, p.eps_prime_sq));
  throw_if_violated(b, who);

  const double lb = std::max(1.0, lemma6_gamma_lower_bound(p.b1, p.c1, p.c2, p.c3, p.eps_prime_sq));
  b.hypotheses.push_back(strict("gamma > max{b1^2/c1, (eps'^2 + c2/c1)/(eps'^2 - c3/b1)}", p.gamma, lb));
  throw_if_violated(b, who);

  const double floor = lemma6_floor(p.b1, p.c1, p.c2, p.c3, p.gamma);
  b.hypotheses.push_back(strict("eps'^2 > floor", p.eps_prime_sq, floor));
  throw_if_violated(b, who, ErrorCode::kTargetBelowFloor);

  const double g = p.gamma;
  b.eta_prime = p.b1 / (g * p.c1);
  b.alpha = 1.0 - (p.b1 * p.b1 / p.c1) * (1.0 / g - 1.0 / (g * g));
  b.beta = b.eta_prime * b.eta_prime * p.c2 + b.eta_prime * p.c3;
  b.floor = floor;
  const double one_minus = 1.0 - b.alpha;
  const double ratio = (p.eps_prime_sq * one_minus - b.beta) / (p.C * one_minus - b.beta);
  b.predicted_T = steps_for_ratio(b.alpha, ratio);
  return b;
}

}  // namespace

RecursionBound recurse2(const RecursionParams& p) { return lemma6_impl(p, false); }

RecursionBound recurse2_allow_noiseless(const RecursionParams& p) { return lemma6_impl(p, true); }

UnrollResult unroll_worst_case(const RecursionParams& p, const RecursionBound& bound) {
  if (!bound.all_satisfied()) fail(ErrorCode::kHypothesis, "unroll_worst_case: bound has unsatisfied hypotheses");
  if (bound.predicted_T < 1) fail(ErrorCode::kInvalidArgument, "unroll_worst_case: predicted_T < 1");
  UnrollResult r;
  r.sequence.reserve(static_cast<std::size_t>(bound.predicted_T));
  double d = p.C;
  r.sequence.push_back(d);
  for (std::int64_t t = 1; t < bound.predicted_T; ++t) {
    d = bound.alpha * d + bound.beta;
    r.sequence.push_back(d);
  }
  r.certified = r.sequence.back() <= p.eps_prime_sq + kUnrollSlack;
  return r;
}

}  // namespace tt
