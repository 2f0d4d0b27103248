// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "trontrain/tensor_core.hpp"

namespace tt {

struct LabeledSample {
  RealVector x;
  double y = 0.0;
};

// Non-empty multiset of samples sharing input dimension n.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledSample> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t dim() const noexcept { return n_; }
  bool empty() const noexcept { return samples_.empty(); }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

  void push_back(LabeledSample s);

 private:
  std::size_t n_ = 0;
  std::vector<LabeledSample> samples_;
};

RealMatrix empirical_covariance(const Dataset& d);
double radius(const Dataset& d);

struct LabelRule {
  enum class Kind { kZero, kCopy, kCustom };
  Kind kind = Kind::kZero;
  // kCustom: label for the mirrored input -x given the original sample.
  std::function<double(const LabeledSample&)> custom;

  static LabelRule zero() { return {}; }
  static LabelRule copy() { return {Kind::kCopy, {}}; }
  static LabelRule map(std::function<double(const LabeledSample&)> f) { return {Kind::kCustom, std::move(f)}; }
};

// Appends mirrored inputs until every input x occurs no more often than -x.
// Original samples keep their order and labels.
Dataset symmetrize(const Dataset& d, const LabelRule& rule = LabelRule::zero());

// Multiset parity check: count(x) == count(-x) for every input x.
bool is_symmetric(const Dataset& d);

// CSV with header x0,...,x{n-1},y.
Dataset load_dataset_csv(const std::string& path);
Dataset read_dataset_csv(std::istream& in);
void save_dataset_csv(const Dataset& d, const std::string& path);
void write_dataset_csv(const Dataset& d, std::ostream& out);

// 17 significant digits, round-trip safe.
std::string format_real(double v);

}  // namespace tt
