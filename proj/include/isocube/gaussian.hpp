#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isocube/rng.hpp"

namespace isocube {

inline constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2*pi)
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;

/// Standard normal density (1/sqrt(2*pi)) * exp(-t^2/2).
inline double std_normal_pdf(double t) {
  return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

/// Standard normal CDF via the complementary error function. erfc keeps
/// full relative accuracy in the lower tail where 1 - erf would cancel.
inline double std_normal_cdf(double t) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 * std::erfc(-t * 0.7071067811865476);
}

/// Inverse of std_normal_cdf on (0,1). Bisection bracket to 1e-3 followed
/// by Newton iterations; |cdf(result) - p| stays below 1e-13 over the
/// probed range.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  // Work on the lower half and mirror; cdf is most accurate in the tail.
  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  double lo = -40.0, hi = 0.0;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (std_normal_cdf(mid) < q ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const double err = std_normal_cdf(t) - q;
    const double step = err / std_normal_pdf(t);
    t -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
  }
  return flipped ? -t : t;
}

/// Gaussian isoperimetric profile pdf(quantile(lambda)), with the endpoint
/// convention that it vanishes at 0 and 1.
inline double gaussian_profile(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("gaussian_profile: lambda must lie in [0,1]");
  if (lambda == 0.0 || lambda == 1.0) return 0.0;
  return std_normal_pdf(std_normal_quantile(lambda));
}

/// Product density (2*pi)^(-d/2) * exp(-|x|^2/2).
inline double gaussian_density_d(const Eigen::VectorXd& x) {
  if (x.size() == 0)
    throw std::domain_error("gaussian_density_d: empty point");
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * x.squaredNorm() - 0.5 * d * std::log(2.0 * M_PI));
}

/// n standard Gaussian points in dimension d, one per column. Draws are
/// quantile-inverted CounterRng uniforms, so output is a pure function of
/// (d, n, seed).
inline Eigen::MatrixXd sample_gaussian(int d, long n, std::uint64_t seed) {
  if (d < 1) throw std::domain_error("sample_gaussian: d must be >= 1");
  if (n < 1) throw std::domain_error("sample_gaussian: n must be >= 1");
  CounterRng rng(seed);
  Eigen::MatrixXd out(d, n);
  for (long j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i)
      out(i, j) = std_normal_quantile(rng.next_open01());
  return out;
}

}  // namespace isocube
