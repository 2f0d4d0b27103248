// SPDX-License-Identifier: Apache-2.0
#include "trontrain/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trontrain/error.hpp"
#include "trontrain/parallel.hpp"

namespace tt {

InputDistribution InputDistribution::uniform_box(RealVector low, RealVector high) {
  low.validate("uniform_box low");
  high.validate("uniform_box high");
  if (low.dim() != high.dim()) fail(ErrorCode::kDimensionMismatch, "uniform_box: low/high dimensions differ");
  double r2 = 0.0;
  for (std::size_t i = 0; i < low.dim(); ++i) {
    if (!(low[i] < high[i])) fail(ErrorCode::kInvalidArgument, "uniform_box: low must be < high componentwise");
    const double m = std::max(std::abs(low[i]), std::abs(high[i]));
    r2 += m * m;
  }
  InputDistribution d;
  d.kind_ = Kind::kUniformBox;
  d.n_ = low.dim();
  d.low_ = std::move(low);
  d.high_ = std::move(high);
  d.radius_ = std::sqrt(r2);
  d.name_ = "uniform_box";
  return d;
}

InputDistribution InputDistribution::uniform_cube(std::size_t n, double lo, double hi) {
  return uniform_box(RealVector(n, lo), RealVector(n, hi));
}

InputDistribution InputDistribution::isotropic_gaussian(std::size_t n, double sigma) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "isotropic_gaussian: n must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorCode::kInvalidArgument, "isotropic_gaussian: sigma must be > 0");
  InputDistribution d;
  d.kind_ = Kind::kIsotropicGaussian;
  d.n_ = n;
  d.sigma_ = sigma;
  d.radius_ = std::numeric_limits<double>::infinity();
  d.name_ = "isotropic_gaussian";
  return d;
}

InputDistribution InputDistribution::custom(std::size_t n, Sampler sampler, std::string name, double radius) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "custom distribution: n must be >= 1");
  if (!sampler) fail(ErrorCode::kInvalidArgument, "custom distribution: empty sampler");
  InputDistribution d;
  d.kind_ = Kind::kCustom;
  d.n_ = n;
  d.sampler_ = std::move(sampler);
  d.name_ = std::move(name);
  d.radius_ = radius;
  return d;
}

InputDistribution InputDistribution::unit_sphere(std::size_t n) {
  return custom(
      n,
      [n](Rng& rng) {
        RealVector x(n);
        double s = 0.0;
        do {
          for (std::size_t i = 0; i < n; ++i) x[i] = standard_normal(rng);
          s = norm(x);
        } while (s == 0.0);
        return x *= 1.0 / s;
      },
      "unit_sphere", 1.0);
}

InputDistribution InputDistribution::unit_ball(std::size_t n) {
  return custom(
      n,
      [n](Rng& rng) {
        RealVector x(n);
        double s = 0.0;
        do {
          for (std::size_t i = 0; i < n; ++i) x[i] = standard_normal(rng);
          s = norm(x);
        } while (s == 0.0);
        // Radial law r = U^{1/n} makes the draw uniform in the ball.
        const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(n));
        return x *= r / s;
      },
      "unit_ball", 1.0);
}

RealVector InputDistribution::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::kUniformBox: {
      RealVector x(n_);
      for (std::size_t i = 0; i < n_; ++i) x[i] = uniform(rng, low_[i], high_[i]);
      return x;
    }
    case Kind::kIsotropicGaussian: {
      RealVector x(n_);
      for (std::size_t i = 0; i < n_; ++i) x[i] = sigma_ * standard_normal(rng);
      return x;
    }
    case Kind::kCustom:
      break;
  }
  RealVector x = sampler_(rng);
  if (x.dim() != n_) fail(ErrorCode::kDimensionMismatch, "custom sampler returned wrong dimension");
  return x;
}

std::vector<RealVector> sample(const InputDistribution& dist, std::uint64_t seed, std::size_t count) {
  if (count == 0) fail(ErrorCode::kInvalidArgument, "sample: count must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<RealVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dist.draw(rng));
  return out;
}

AttackProbability AttackProbability::constant(double p) {
  if (!std::isfinite(p)) fail(ErrorCode::kInvalidArgument, "beta constant: non-finite p");
  AttackProbability b;
  b.kind_ = Kind::kConstant;
  b.p_ = std::clamp(p, 0.0, 1.0);
  b.name_ = "constant";
  return b;
}

AttackProbability AttackProbability::indicator_halfspace(RealVector v, double p) {
  v.validate("beta indicator_halfspace v");
  if (!std::isfinite(p)) fail(ErrorCode::kInvalidArgument, "beta indicator_halfspace: non-finite p");
  AttackProbability b;
  b.kind_ = Kind::kIndicatorHalfspace;
  b.p_ = std::clamp(p, 0.0, 1.0);
  b.v_ = std::move(v);
  b.name_ = "indicator_halfspace";
  return b;
}

AttackProbability AttackProbability::custom(std::function<double(const RealVector&)> f, std::string name) {
  if (!f) fail(ErrorCode::kInvalidArgument, "beta custom: empty function");
  AttackProbability b;
  b.kind_ = Kind::kCustom;
  b.f_ = std::move(f);
  b.name_ = std::move(name);
  return b;
}

double AttackProbability::operator()(const RealVector& x) const {
  switch (kind_) {
    case Kind::kConstant:
      return p_;
    case Kind::kIndicatorHalfspace:
      return dot(v_, x) > 0.0 ? p_ : 0.0;
    case Kind::kCustom:
      break;
  }
  const double v = f_(x);
  return std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
}

double AttackProbability::sup() const noexcept { return kind_ == Kind::kCustom ? 1.0 : p_; }

namespace {

// Running sums for one stream. Index map: 0..3 a1..a4, 4..6 beta1..beta3.
struct MomentAccumulator {
  double sum[7] = {0, 0, 0, 0, 0, 0, 0};
  double sumsq[7] = {0, 0, 0, 0, 0, 0, 0};
  RealMatrix second;
  std::size_t count = 0;
};

double sample_std_err(double sum, double sumsq, double n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace

MomentEstimates estimate_moments(const InputDistribution& dist, const RealVector& w_star, double theta_star,
                                 const AttackProbability& beta, std::size_t mc_samples, std::uint64_t seed,
                                 std::size_t streams) {
  w_star.validate("estimate_moments w_star");
  if (w_star.dim() != dist.dim()) fail(ErrorCode::kDimensionMismatch, "estimate_moments: w_star dimension");
  if (mc_samples < 1000) fail(ErrorCode::kInvalidArgument, "estimate_moments: mc_samples must be >= 1000");
  if (!(theta_star >= 0.0) || !std::isfinite(theta_star)) {
    fail(ErrorCode::kInvalidArgument, "estimate_moments: theta_star must be >= 0");
  }
  if (streams == 0) streams = 1;
  const std::size_t n = dist.dim();
  const double threshold = 2.0 * theta_star;

  auto stream_count = [&](std::size_t s) { return mc_samples / streams + (s < mc_samples % streams ? 1 : 0); };

  std::vector<MomentAccumulator> acc(streams);
  parallel_for(streams, [&](std::size_t s) {
    MomentAccumulator& a = acc[s];
    a.second = RealMatrix(n, n);
    Rng rng = make_rng(seed, s, 0x6d6f6d);
    const std::size_t m = stream_count(s);
    for (std::size_t k = 0; k < m; ++k) {
      const RealVector x = dist.draw(rng);
      const double proj = dot(w_star, x);
      const double r = norm(x);
      const double bx = beta(x);
      if (proj > 0.0) {
        double p = 1.0;
        for (int j = 0; j < 4; ++j) {
          p *= r;
          a.sum[j] += p;
          a.sumsq[j] += p * p;
          if (j < 3) {
            const double t = bx * p;
            a.sum[4 + j] += t;
            a.sumsq[4 + j] += t * t;
          }
        }
      }
      if (proj > threshold) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) a.second(i, j) += x[i] * x[j];
      }
    }
    a.count = m;
  });

  MomentEstimates out;
  out.theta_star = theta_star;
  out.n_samples = mc_samples;
  out.provenance = Provenance::kMonteCarlo;
  double sum[7] = {0, 0, 0, 0, 0, 0, 0};
  double sumsq[7] = {0, 0, 0, 0, 0, 0, 0};
  RealMatrix second(n, n);
  for (const auto& a : acc) {
    for (int j = 0; j < 7; ++j) {
      sum[j] += a.sum[j];
      sumsq[j] += a.sumsq[j];
    }
    second += a.second;
  }
  const double N = static_cast<double>(mc_samples);
  second *= 1.0 / N;
  double* means[7] = {&out.a1, &out.a2, &out.a3, &out.a4, &out.beta1, &out.beta2, &out.beta3};
  double* errs[7] = {&out.std_err.a1,    &out.std_err.a2,    &out.std_err.a3,   &out.std_err.a4,
                     &out.std_err.beta1, &out.std_err.beta2, &out.std_err.beta3};
  for (int j = 0; j < 7; ++j) {
    *means[j] = sum[j] / N;
    *errs[j] = sample_std_err(sum[j], sumsq[j], N);
  }

  const SymmetricEigen eig = eigen_symmetric(second);
  out.lambda1_theta = eig.values[0];
  out.truncated_second_moment = second;

  // Standard error of the Rayleigh quotient at the bottom eigenvector,
  // recomputed on the same streams.
  RealVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = eig.vectors(i, 0);
  std::vector<double> qsum(streams, 0.0), qsumsq(streams, 0.0);
  parallel_for(streams, [&](std::size_t s) {
    Rng rng = make_rng(seed, s, 0x6d6f6d);
    const std::size_t m = stream_count(s);
    for (std::size_t k = 0; k < m; ++k) {
      const RealVector x = dist.draw(rng);
      (void)beta(x);  // keep custom beta side effects aligned with pass one
      if (dot(w_star, x) > threshold) {
        const double q = dot(v, x);
        const double q2 = q * q;
        qsum[s] += q2;
        qsumsq[s] += q2 * q2;
      }
    }
  });
  double qs = 0.0, qss = 0.0;
  for (std::size_t s = 0; s < streams; ++s) {
    qs += qsum[s];
    qss += qsumsq[s];
  }
  out.std_err.lambda1_theta = sample_std_err(qs, qss, N);
  return out;
}

Example1Values example1_analytic(double theta_star) {
  if (!(theta_star >= 0.0)) fail(ErrorCode::kInvalidArgument, "example1_analytic: theta_star must be >= 0");
  const double t = theta_star;
  const double u = 2.0 * t - 1.0;
  Example1Values v;
  v.d1 = (7.0 - 8.0 * t + u * u * u * u) / 48.0;
  v.d2 = -t * (t - 1.0) * (t - 1.0) * (t + 2.0) / 6.0;
  v.lambda1 = v.d1 - std::abs(v.d2);
  return v;
}

}  // namespace tt
