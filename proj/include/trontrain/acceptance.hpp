// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tt {

struct CriterionResult {
  std::string id;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  // Multiplies every tolerance; 0 must make the Monte-Carlo criteria fail.
  double tolerance_scale = 1.0;
};

// 1a 1b 2 3 4 5 6 7 8 9a 9b 9c 9d 10, in report order.
const std::vector<std::string>& criterion_ids();

// Failures are reported in the result, never thrown. Unknown id: kInvalidArgument.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opts = {});

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// "[PASS] id  measured=...  tol=...  detail".
std::string format_result(const CriterionResult& r);

}  // namespace tt
