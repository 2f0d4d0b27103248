// SPDX-License-Identifier: Apache-2.0
#include "trontrain/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "trontrain/error.hpp"

namespace tt {

Dataset::Dataset(std::vector<LabeledSample> samples) {
  for (auto& s : samples) push_back(std::move(s));
}

void Dataset::push_back(LabeledSample s) {
  s.x.validate("dataset sample");
  if (!std::isfinite(s.y)) fail(ErrorCode::kNumeric, "dataset sample: non-finite label");
  if (samples_.empty()) {
    n_ = s.x.dim();
  } else if (s.x.dim() != n_) {
    fail(ErrorCode::kDimensionMismatch, "dataset: sample dimension " + std::to_string(s.x.dim()) +
                                            " differs from " + std::to_string(n_));
  }
  samples_.push_back(std::move(s));
}

RealMatrix empirical_covariance(const Dataset& d) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "empirical_covariance: empty dataset");
  const std::size_t n = d.dim();
  RealMatrix c(n, n);
  for (const auto& s : d.samples())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) += s.x[i] * s.x[j];
  c *= 1.0 / static_cast<double>(d.size());
  return c;
}

double radius(const Dataset& d) {
  if (d.empty()) fail(ErrorCode::kEmptyInput, "radius: empty dataset");
  double r = 0.0;
  for (const auto& s : d.samples()) r = std::max(r, norm(s.x));
  return r;
}

namespace {

using Key = std::vector<double>;

Key negated(const Key& k) {
  Key out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = -k[i];
  return out;
}

double mirrored_label(const LabelRule& rule, const LabeledSample& s) {
  switch (rule.kind) {
    case LabelRule::Kind::kZero:
      return 0.0;
    case LabelRule::Kind::kCopy:
      return s.y;
    case LabelRule::Kind::kCustom:
      if (!rule.custom) fail(ErrorCode::kInvalidArgument, "symmetrize: custom rule without a function");
      return rule.custom(s);
  }
  return 0.0;
}

}  // namespace

Dataset symmetrize(const Dataset& d, const LabelRule& rule) {
  std::map<Key, long> remaining;
  for (const auto& s : d.samples()) ++remaining[s.x.entries()];

  Dataset out = d;
  for (const auto& s : d.samples()) {
    const Key& k = s.x.entries();
    auto it = remaining.find(k);
    if (it->second == 0) continue;  // consumed as the partner of an earlier sample
    --it->second;
    const Key nk = negated(k);
    if (nk == k) continue;  // origin is its own mirror
    auto jt = remaining.find(nk);
    if (jt != remaining.end() && jt->second > 0) {
      --jt->second;
      continue;
    }
    out.push_back({RealVector(nk), mirrored_label(rule, s)});
  }
  return out;
}

bool is_symmetric(const Dataset& d) {
  std::map<Key, long> counts;
  for (const auto& s : d.samples()) ++counts[s.x.entries()];
  for (const auto& [k, c] : counts) {
    auto it = counts.find(negated(k));
    if (it == counts.end() || it->second != c) return false;
  }
  return true;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail(ErrorCode::kParse, "dataset csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "dataset csv: missing header");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") {
    fail(ErrorCode::kParse, "dataset csv: header must be x0,...,x{n-1},y");
  }
  const std::size_t n = header.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (header[i] != "x" + std::to_string(i)) {
      fail(ErrorCode::kParse, "dataset csv: header column " + std::to_string(i) + " must be x" + std::to_string(i));
    }
  }
  Dataset d;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != n + 1) {
      fail(ErrorCode::kParse, "dataset csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n + 1) + " columns, got " + std::to_string(cells.size()));
    }
    RealVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = parse_real(cells[i], line_no);
    d.push_back({std::move(x), parse_real(cells[n], line_no)});
  }
  if (d.empty()) fail(ErrorCode::kEmptyInput, "dataset csv: no samples");
  return d;
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open dataset '" + path + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(const Dataset& d, std::ostream& out) {
  for (std::size_t i = 0; i < d.dim(); ++i) out << 'x' << i << ',';
  out << "y\n";
  for (const auto& s : d.samples()) {
    for (std::size_t i = 0; i < s.x.dim(); ++i) out << format_real(s.x[i]) << ',';
    out << format_real(s.y) << '\n';
  }
}

void save_dataset_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write dataset '" + path + "'");
  write_dataset_csv(d, out);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace tt
