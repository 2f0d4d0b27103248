// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "trontrain/error.hpp"
#include "trontrain/rng.hpp"
#include "trontrain/tensor_core.hpp"

using namespace tt;

namespace {

RealMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  RealMatrix m(r, c);
  for (auto& v : m.entries()) v = standard_normal(rng);
  return m;
}

RealVector random_vector(std::size_t n, Rng& rng) {
  RealVector v(n);
  for (auto& x : v) x = standard_normal(rng);
  return v;
}

}  // namespace

TEST_CASE("leaky_relu examples") {
  CHECK(leaky_relu(3.0, 0.1) == 3.0);
  CHECK(leaky_relu(-2.0, 0.1) == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(leaky_relu(0.0, 0.7) == 0.0);
  CHECK(relu(-1.0) == 0.0);
  CHECK(indicator_positive(0.0) == 0.0);
  CHECK(indicator_positive(1e-300) == 1.0);
}

TEST_CASE("leaky_relu odd-part identity") {
  Rng rng = make_rng(7);
  for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
    for (int i = 0; i < 200; ++i) {
      const double z = uniform(rng, -10.0, 10.0);
      CHECK(leaky_relu(z, alpha) - leaky_relu(-z, alpha) == doctest::Approx((1.0 + alpha) * z).epsilon(1e-14));
    }
  }
}

TEST_CASE("lambda_min examples") {
  CHECK(lambda_min_symmetric(RealMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(lambda_min_symmetric(RealMatrix::diagonal({2.0, 0.5, 7.0})) == doctest::Approx(0.5));
  CHECK(lambda_min_symmetric(RealMatrix{{1.0 / 6, 0.0}, {0.0, 1.0 / 6}}) == doctest::Approx(1.0 / 6));
  // Only the symmetric part matters.
  CHECK(lambda_min_symmetric(RealMatrix{{1.0, 4.0}, {-4.0, 1.0}}) == doctest::Approx(1.0));
}

TEST_CASE("spectral_norm examples") {
  CHECK(spectral_norm(RealMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(spectral_norm(RealMatrix::diagonal({3.0, -4.0})) == doctest::Approx(4.0));
  CHECK(spectral_norm(RealMatrix{{0.0, 2.0}, {0.0, 0.0}}) == doctest::Approx(2.0));
  // Non-square: rows (3,4) and (0,0) give norm 5.
  CHECK(spectral_norm(RealMatrix{{3.0, 4.0, 0.0}, {0.0, 0.0, 0.0}}) == doctest::Approx(5.0));
}

TEST_CASE("Rayleigh quotient bounds lambda_min from above") {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const RealMatrix S = symmetric_part(random_matrix(n, n, rng));
    const double lmin = lambda_min_symmetric(S);
    for (int k = 0; k < 20; ++k) {
      RealVector v = random_vector(n, rng);
      v *= 1.0 / norm(v);
      CHECK(dot(v, matvec(S, v)) >= lmin - 1e-8);
    }
  }
}

TEST_CASE("spectral_norm dominates every ||Av||/||v||") {
  Rng rng = make_rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix A = random_matrix(1 + trial % 4, 1 + trial % 5, rng);
    const double s = spectral_norm(A);
    for (int k = 0; k < 20; ++k) {
      const RealVector v = random_vector(A.cols(), rng);
      CHECK(s >= norm(matvec(A, v)) / norm(v) - 1e-12);
    }
  }
}

TEST_CASE("eigen_symmetric reconstructs the symmetric part") {
  Rng rng = make_rng(13);
  const RealMatrix S = symmetric_part(random_matrix(5, 5, rng));
  const SymmetricEigen e = eigen_symmetric(S);
  for (std::size_t k = 1; k < 5; ++k) CHECK(e.values[k - 1] <= e.values[k]);
  RealMatrix rebuilt(5, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    RealVector col(5);
    for (std::size_t i = 0; i < 5; ++i) col[i] = e.vectors(i, k);
    rebuilt += e.values[k] * RealMatrix::outer(col, col);
  }
  CHECK(max_abs_diff(rebuilt, S) < 1e-12);
}

TEST_CASE("vector and matrix arithmetic") {
  const RealVector a{1.0, 2.0, 2.0};
  const RealVector b{0.0, -1.0, 1.0};
  CHECK(dot(a, b) == 0.0);
  CHECK(norm(a) == doctest::Approx(3.0));
  CHECK(squared_distance(a, b) == doctest::Approx(1.0 + 9.0 + 1.0));
  CHECK(inf_norm(b) == 1.0);
  RealVector c = a;
  axpy(2.0, b, c);
  CHECK(c == RealVector{1.0, 0.0, 4.0});

  const RealMatrix m{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  CHECK(matvec(m, RealVector{1.0, 1.0}) == RealVector{3.0, 7.0, 11.0});
  CHECK(matvec_transposed(m, RealVector{1.0, 0.0, 1.0}) == RealVector{6.0, 8.0});
  CHECK(matmul(m.transpose(), m) == RealMatrix{{35.0, 44.0}, {44.0, 56.0}});
  CHECK(frobenius_norm(RealMatrix{{3.0, 0.0}, {0.0, 4.0}}) == doctest::Approx(5.0));
}

TEST_CASE("shape and finiteness guards") {
  CHECK_THROWS_AS(RealVector{1.0} + RealVector({1.0, 2.0}), Error);
  CHECK_THROWS_AS(matmul(RealMatrix(2, 3), RealMatrix(2, 3)), Error);
  CHECK_THROWS_AS(RealMatrix(2, 2, std::vector<double>{1.0, 2.0, 3.0}), Error);
  RealVector v{1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_FALSE(v.all_finite());
  try {
    v.validate("v");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNumeric);
  }
  try {
    RealVector().validate("empty");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("smallest_singular_value") {
  CHECK(smallest_singular_value(RealMatrix::diagonal({3.0, 0.5})) == doctest::Approx(0.5));
  CHECK(smallest_singular_value(RealMatrix{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}}) == doctest::Approx(1.0));
  CHECK(smallest_singular_value(RealMatrix{{1.0, 1.0}, {1.0, 1.0}}) < 1e-12);
}
