// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace tt {

// Dense real vector. dim() >= 1 once constructed through the public
// constructors; entries are finite whenever validate() has passed.
class RealVector {
 public:
  RealVector() = default;
  explicit RealVector(std::size_t dim, double fill = 0.0);
  RealVector(std::initializer_list<double> values);
  explicit RealVector(std::vector<double> values);

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  const std::vector<double>& entries() const noexcept { return data_; }
  std::vector<double>& entries() noexcept { return data_; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;
  // Throws kNumeric on NaN/Inf and kInvalidArgument on dim 0.
  void validate(const std::string& what) const;

  RealVector& operator+=(const RealVector& o);
  RealVector& operator-=(const RealVector& o);
  RealVector& operator*=(double s);

  bool operator==(const RealVector& o) const { return data_ == o.data_; }

 private:
  std::vector<double> data_;
};

RealVector operator+(RealVector a, const RealVector& b);
RealVector operator-(RealVector a, const RealVector& b);
RealVector operator-(RealVector a);
RealVector operator*(double s, RealVector a);
RealVector operator*(RealVector a, double s);

double dot(const RealVector& a, const RealVector& b);
double norm(const RealVector& a);
double squared_norm(const RealVector& a);
double squared_distance(const RealVector& a, const RealVector& b);
double inf_norm(const RealVector& a);
// a += s * b
void axpy(double s, const RealVector& b, RealVector& a);

// Row-major dense matrix; rows * cols == entries().size().
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static RealMatrix identity(std::size_t n);
  static RealMatrix diagonal(const RealVector& d);
  static RealMatrix outer(const RealVector& a, const RealVector& b);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& entries() const noexcept { return data_; }
  std::vector<double>& entries() noexcept { return data_; }
  const double* row_ptr(std::size_t i) const noexcept { return data_.data() + i * cols_; }

  bool all_finite() const noexcept;
  void validate(const std::string& what) const;

  RealMatrix transpose() const;
  RealMatrix& operator+=(const RealMatrix& o);
  RealMatrix& operator-=(const RealMatrix& o);
  RealMatrix& operator*=(double s);

  bool operator==(const RealMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

RealMatrix operator+(RealMatrix a, const RealMatrix& b);
RealMatrix operator-(RealMatrix a, const RealMatrix& b);
RealMatrix operator*(double s, RealMatrix a);
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealVector matvec(const RealMatrix& a, const RealVector& x);
// Aᵀx without forming the transpose.
RealVector matvec_transposed(const RealMatrix& a, const RealVector& x);
RealMatrix symmetric_part(const RealMatrix& s);
double frobenius_norm(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

double leaky_relu(double z, double alpha) noexcept;
inline double relu(double z) noexcept { return z > 0.0 ? z : 0.0; }
// Strict indicator 1{z > 0}; ties take the false branch.
inline double indicator_positive(double z) noexcept { return z > 0.0 ? 1.0 : 0.0; }

struct SymmetricEigen {
  RealVector values;   // ascending
  RealMatrix vectors;  // column k pairs with values[k]
};

// Eigendecomposition of (S + Sᵀ)/2.
SymmetricEigen eigen_symmetric(const RealMatrix& s);
double lambda_min_symmetric(const RealMatrix& s);
double lambda_max_symmetric(const RealMatrix& s);
double spectral_norm(const RealMatrix& a);
double smallest_singular_value(const RealMatrix& a);

inline constexpr double kEigenTolerance = 1e-10;

}  // namespace tt
