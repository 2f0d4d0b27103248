// SPDX-License-Identifier: Apache-2.0
#include "trontrain/tensor_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "trontrain/error.hpp"

namespace tt {

namespace {

void check_same_dim(const RealVector& a, const RealVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    fail(ErrorCode::kDimensionMismatch, std::string(op) + ": dimension " + std::to_string(a.dim()) +
                                            " vs " + std::to_string(b.dim()));
  }
}

void check_same_shape(const RealMatrix& a, const RealMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimensionMismatch, std::string(op) + ": shape mismatch");
  }
}

using EigenMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMat to_eigen(const RealMatrix& m) {
  EigenMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace

RealVector::RealVector(std::size_t dim, double fill) : data_(dim, fill) {}
RealVector::RealVector(std::initializer_list<double> values) : data_(values) {}
RealVector::RealVector(std::vector<double> values) : data_(std::move(values)) {}

bool RealVector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void RealVector::validate(const std::string& what) const {
  if (data_.empty()) fail(ErrorCode::kInvalidArgument, what + ": vector has dimension 0");
  if (!all_finite()) fail(ErrorCode::kNumeric, what + ": non-finite entry");
}

RealVector& RealVector::operator+=(const RealVector& o) {
  check_same_dim(*this, o, "vector +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

RealVector& RealVector::operator-=(const RealVector& o) {
  check_same_dim(*this, o, "vector -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

RealVector& RealVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

RealVector operator+(RealVector a, const RealVector& b) { return a += b; }
RealVector operator-(RealVector a, const RealVector& b) { return a -= b; }
RealVector operator-(RealVector a) { return a *= -1.0; }
RealVector operator*(double s, RealVector a) { return a *= s; }
RealVector operator*(RealVector a, double s) { return a *= s; }

double dot(const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const RealVector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm(const RealVector& a) { return std::sqrt(squared_norm(a)); }

double squared_distance(const RealVector& a, const RealVector& b) {
  check_same_dim(a, b, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double inf_norm(const RealVector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double s, const RealVector& b, RealVector& a) {
  check_same_dim(a, b, "axpy");
  for (std::size_t i = 0; i < a.dim(); ++i) a[i] += s * b[i];
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorCode::kDimensionMismatch, "matrix: entry count does not match rows*cols");
  }
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::kDimensionMismatch, "matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::diagonal(const RealVector& d) {
  RealMatrix m(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return m;
}

RealMatrix RealMatrix::outer(const RealVector& a, const RealVector& b) {
  RealMatrix m(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

bool RealMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void RealMatrix::validate(const std::string& what) const {
  if (rows_ == 0 || cols_ == 0) fail(ErrorCode::kInvalidArgument, what + ": empty matrix");
  if (!all_finite()) fail(ErrorCode::kNumeric, what + ": non-finite entry");
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
  check_same_shape(*this, o, "matrix +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
  check_same_shape(*this, o, "matrix -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

RealMatrix& RealMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
RealMatrix operator*(double s, RealMatrix a) { return a *= s; }

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kDimensionMismatch, "matmul: inner dimensions differ");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

RealVector matvec(const RealMatrix& a, const RealVector& x) {
  if (a.cols() != x.dim()) fail(ErrorCode::kDimensionMismatch, "matvec: dimension mismatch");
  RealVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

RealVector matvec_transposed(const RealMatrix& a, const RealVector& x) {
  if (a.rows() != x.dim()) fail(ErrorCode::kDimensionMismatch, "matvec_transposed: dimension mismatch");
  RealVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * x[i];
  }
  return y;
}

RealMatrix symmetric_part(const RealMatrix& s) {
  if (!s.square()) fail(ErrorCode::kDimensionMismatch, "symmetric_part: matrix is not square");
  RealMatrix out(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) out(i, j) = 0.5 * (s(i, j) + s(j, i));
  return out;
}

double frobenius_norm(const RealMatrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  check_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

double leaky_relu(double z, double alpha) noexcept { return z >= 0.0 ? z : alpha * z; }

SymmetricEigen eigen_symmetric(const RealMatrix& s) {
  if (!s.square()) fail(ErrorCode::kDimensionMismatch, "lambda_min_symmetric: matrix is not square");
  if (s.rows() == 0) fail(ErrorCode::kDimensionMismatch, "lambda_min_symmetric: empty matrix");
  const EigenMat sym = to_eigen(symmetric_part(s));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kNumeric, "eigen solver did not converge");
  const std::size_t n = s.rows();
  SymmetricEigen out{RealVector(n), RealMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, k) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return out;
}

double lambda_min_symmetric(const RealMatrix& s) { return eigen_symmetric(s).values[0]; }

double lambda_max_symmetric(const RealMatrix& s) {
  const auto e = eigen_symmetric(s);
  return e.values[e.values.dim() - 1];
}

double spectral_norm(const RealMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  return svd.singularValues()(0);
}

double smallest_singular_value(const RealMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

}  // namespace tt
