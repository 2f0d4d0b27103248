// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trontrain/rng.hpp"
#include "trontrain/tensor_core.hpp"

namespace tt {

class InputDistribution {
 public:
  enum class Kind { kUniformBox, kIsotropicGaussian, kCustom };
  using Sampler = std::function<RealVector(Rng&)>;

  // low < high componentwise.
  static InputDistribution uniform_box(RealVector low, RealVector high);
  // Shorthand for [lo, hi]^n.
  static InputDistribution uniform_cube(std::size_t n, double lo, double hi);
  // sigma > 0.
  static InputDistribution isotropic_gaussian(std::size_t n, double sigma);
  // radius is sup ||x|| over the support, +inf when unbounded.
  static InputDistribution custom(std::size_t n, Sampler sampler, std::string name, double radius);
  static InputDistribution unit_ball(std::size_t n);
  static InputDistribution unit_sphere(std::size_t n);

  RealVector draw(Rng& rng) const;
  std::size_t dim() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  const RealVector& low() const noexcept { return low_; }
  const RealVector& high() const noexcept { return high_; }
  double sigma() const noexcept { return sigma_; }
  const std::string& name() const noexcept { return name_; }
  double support_radius() const noexcept { return radius_; }

 private:
  Kind kind_ = Kind::kCustom;
  std::size_t n_ = 0;
  RealVector low_, high_;
  double sigma_ = 1.0;
  double radius_ = 0.0;
  std::string name_;
  Sampler sampler_;
};

// Deterministic i.i.d. draws for a seed.
std::vector<RealVector> sample(const InputDistribution& dist, std::uint64_t seed, std::size_t count);

// beta(x) in [0,1]: probability that the oracle perturbs the label of x.
class AttackProbability {
 public:
  enum class Kind { kConstant, kIndicatorHalfspace, kCustom };

  static AttackProbability constant(double p);
  // p on {v^T x > 0}, 0 elsewhere.
  static AttackProbability indicator_halfspace(RealVector v, double p);
  static AttackProbability custom(std::function<double(const RealVector&)> f, std::string name);

  // Clamped to [0,1].
  double operator()(const RealVector& x) const;
  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  const RealVector& v() const noexcept { return v_; }
  const std::string& name() const noexcept { return name_; }
  // sup_x beta(x) for the built-ins; 1 for custom.
  double sup() const noexcept;

 private:
  Kind kind_ = Kind::kConstant;
  double p_ = 0.0;
  RealVector v_;
  std::string name_;
  std::function<double(const RealVector&)> f_;
};

struct MomentStdErr {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double beta1 = 0, beta2 = 0, beta3 = 0;
  double lambda1_theta = 0;
};

enum class Provenance { kAnalytic, kMonteCarlo };

struct MomentEstimates {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double beta1 = 0, beta2 = 0, beta3 = 0;
  double lambda1_theta = 0;
  double theta_star = 0;
  std::uint64_t n_samples = 0;
  MomentStdErr std_err;
  Provenance provenance = Provenance::kMonteCarlo;
  // E[1{w*ᵀx > 2θ*} x xᵀ] as averaged; kept for diagnostics.
  RealMatrix truncated_second_moment;
};

inline constexpr std::size_t kDefaultMomentStreams = 8;
inline constexpr std::size_t kUnitTestMcSamples = 10000;
inline constexpr std::size_t kAcceptanceMcSamples = 1000000;

// Monte-Carlo estimates of the distributional constants. mc_samples >= 1000.
// Samples are split over `streams` seeded streams and reduced in stream
// order, so results depend only on (seed, streams, mc_samples).
MomentEstimates estimate_moments(const InputDistribution& dist, const RealVector& w_star, double theta_star,
                                 const AttackProbability& beta, std::size_t mc_samples, std::uint64_t seed,
                                 std::size_t streams = kDefaultMomentStreams);

struct Example1Values {
  double d1 = 0, d2 = 0, lambda1 = 0;
};

// Closed forms on Unif[-1,1]^2 with w* = (-1,1), valid for theta_star in [0,1].
Example1Values example1_analytic(double theta_star);

}  // namespace tt
