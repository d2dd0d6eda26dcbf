#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocube/candidates.hpp"
#include "isocube/gaussian.hpp"
#include "isocube/report.hpp"
#include "isocube/rng.hpp"

namespace isocube {

inline constexpr int kMaxTransportDim = 16;

inline void check_transport_dim(Eigen::Index d) {
  if (d < 1 || d > kMaxTransportDim)
    throw std::domain_error("transport: dimension must lie in 1..16");
}

/// Coordinatewise Gaussian CDF; pushes gamma_d to Lebesgue on (0,1)^d.
inline Eigen::VectorXd to_cube(const Eigen::VectorXd& x) {
  check_transport_dim(x.size());
  return x.unaryExpr([](double t) { return std_normal_cdf(t); });
}

/// Coordinatewise quantile, inverse of to_cube.
inline Eigen::VectorXd to_gauss(const Eigen::VectorXd& y) {
  check_transport_dim(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!(y[i] > 0.0 && y[i] < 1.0))
      throw std::domain_error("to_gauss: coordinates must lie in (0,1)");
  return y.unaryExpr([](double p) { return std_normal_quantile(p); });
}

/// |det A| * |(A^T)^{-1} nu|: the Jacobian of A restricted to the
/// hyperplane orthogonal to the unit vector nu.
inline double restriction_jacobian(const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& nu) {
  const Eigen::Index d = A.rows();
  if (A.cols() != d || nu.size() != d)
    throw std::invalid_argument("restriction_jacobian: shape mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("restriction_jacobian: nu must be unit");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A.transpose());
  const double det = lu.determinant();
  const double scale = std::pow(A.norm() / std::sqrt(double(d)), double(d));
  if (std::abs(det) <= 1e-12 * std::max(scale, 1e-300))
    throw std::runtime_error("restriction_jacobian: singular matrix");
  return std::abs(det) * lu.solve(nu).norm();
}

/// sqrt(2*pi) * sqrt(sum_i nu_i^2 exp(x_i^2)); the factor converting
/// Gaussian-side surface measure to cube-side measure. Always >= sqrt(2*pi),
/// with equality iff nu_i * x_i = 0 for every coordinate.
inline double boundary_weight(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& nu) {
  if (x.size() != nu.size())
    throw std::invalid_argument("boundary_weight: shape mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("boundary_weight: nu must be unit");
  const double s =
      (nu.array().square() * x.array().square().exp()).sum();
  return kSqrt2Pi * std::sqrt(s);
}

/// Weighted point cloud on a hypersurface in Gaussian space. Weights carry
/// plain (unweighted) d-1 dimensional area.
struct SurfaceSample {
  Eigen::MatrixXd points;   // d x m
  Eigen::MatrixXd normals;  // d x m, unit columns
  Eigen::VectorXd weights;  // m, positive

  Eigen::Index size() const { return weights.size(); }

  void validate() const {
    if (points.cols() != normals.cols() || points.cols() != weights.size() ||
        points.rows() != normals.rows())
      throw std::invalid_argument("SurfaceSample: shape mismatch");
    for (Eigen::Index k = 0; k < size(); ++k) {
      if (std::abs(normals.col(k).norm() - 1.0) > 1e-12)
        throw std::invalid_argument("SurfaceSample: non-unit normal");
      if (!(weights[k] > 0.0))
        throw std::invalid_argument("SurfaceSample: non-positive weight");
    }
  }
};

/// Affine half-space {x : normal . x < offset}.
struct HalfspaceSpec {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

struct PenalizedValue {
  double gauss_perimeter = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// Gaussian perimeter plus the cube-transport penalty integral
/// sum_k w_k phi_d(x_k) [1 + (sqrt(sum nu_i^2 e^{x_i^2}) - 1)].
inline PenalizedValue penalized_functional(const SurfaceSample& surface) {
  surface.validate();
  PenalizedValue out;
  for (Eigen::Index k = 0; k < surface.size(); ++k) {
    const double dens = gaussian_density_d(surface.points.col(k));
    const double wd = surface.weights[k] * dens;
    out.gauss_perimeter += wd;
    out.penalty +=
        wd * (boundary_weight(surface.points.col(k), surface.normals.col(k)) /
                  kSqrt2Pi -
              1.0);
  }
  out.total = out.gauss_perimeter + out.penalty;
  return out;
}

/// Orthonormal basis whose first column is v (unit).
inline Eigen::MatrixXd orthonormal_completion(const Eigen::VectorXd& v) {
  const Eigen::Index d = v.size();
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ();
  if (Q.col(0).dot(v) < 0.0) Q = -Q;
  return Q;
}

/// Tensorized midpoint quadrature on the hyperplane {normal . x = offset},
/// truncated to tangential coordinates in [-extent, extent].
inline SurfaceSample analytic_halfspace_surface(const HalfspaceSpec& h, int d,
                                                double extent, int resolution) {
  check_transport_dim(d);
  if (d > 6)
    throw std::domain_error(
        "analytic_halfspace_surface: d > 6 refused (tensor quadrature cost); "
        "use Monte Carlo sampling instead");
  if (resolution < 2)
    throw std::domain_error("analytic_halfspace_surface: resolution must be >= 2");
  if (!(extent > 0.0))
    throw std::domain_error("analytic_halfspace_surface: extent must be > 0");
  if (h.normal.size() != d || std::abs(h.normal.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("analytic_halfspace_surface: bad normal");

  const int t = d - 1;
  const double step = 2.0 * extent / resolution;
  const Eigen::MatrixXd Q = orthonormal_completion(h.normal);
  long m = 1;
  for (int i = 0; i < t; ++i) m *= resolution;

  SurfaceSample s;
  s.points.resize(d, std::max<long>(m, 1));
  s.normals.resize(d, std::max<long>(m, 1));
  s.weights.resize(std::max<long>(m, 1));
  std::vector<int> idx(t, 0);
  for (long k = 0; k < std::max<long>(m, 1); ++k) {
    Eigen::VectorXd x = h.offset * h.normal;
    for (int i = 0; i < t; ++i)
      x += (-extent + (idx[i] + 0.5) * step) * Q.col(i + 1);
    s.points.col(k) = x;
    s.normals.col(k) = h.normal;
    s.weights[k] = std::pow(step, t);
    for (int i = 0; i < t; ++i) {
      if (++idx[i] < resolution) break;
      idx[i] = 0;
    }
  }
  return s;
}

namespace detail {

// Parametric patch y(u) on the cube side with Jacobian dy (d x (d-1)),
// transported to Gaussian space: x_i = quantile(y_i), dx = diag(1/pdf(x_i)) dy.
// Quadrature is always assembled on the Gaussian side.
struct CubePatch {
  int dim;
  int params;  // d - 1
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd lo, hi;
};

inline SurfaceSample transport_patch(const CubePatch& p, int resolution) {
  const int d = p.dim, t = p.params;
  long m = 1;
  for (int i = 0; i < t; ++i) m *= resolution;
  double cell = 1.0;
  for (int i = 0; i < t; ++i) cell *= (p.hi[i] - p.lo[i]) / resolution;

  SurfaceSample s;
  s.points.resize(d, m);
  s.normals.resize(d, m);
  s.weights.resize(m);
  std::vector<int> idx(t, 0);
  for (long k = 0; k < m; ++k) {
    Eigen::VectorXd u(t);
    for (int i = 0; i < t; ++i)
      u[i] = p.lo[i] + (idx[i] + 0.5) * (p.hi[i] - p.lo[i]) / resolution;
    const Eigen::VectorXd y = p.value(u);
    const Eigen::MatrixXd dy = p.jacobian(u);
    Eigen::VectorXd x(d);
    Eigen::MatrixXd dx(d, t);
    for (int i = 0; i < d; ++i) {
      x[i] = std_normal_quantile(y[i]);
      dx.row(i) = dy.row(i) / std_normal_pdf(x[i]);
    }
    s.points.col(k) = x;
    s.weights[k] = std::sqrt((dx.transpose() * dx).determinant()) * cell;
    Eigen::VectorXd n(d);
    if (d == 2) {
      n << -dx(1, 0), dx(0, 0);
    } else if (d == 3) {
      const Eigen::Vector3d a = dx.col(0), b = dx.col(1);
      n = a.cross(b);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(dx, Eigen::ComputeFullU);
      n = svd.matrixU().col(d - 1);
    }
    s.normals.col(k) = n.normalized();
    for (int i = 0; i < t; ++i) {
      if (++idx[i] < resolution) break;
      idx[i] = 0;
    }
  }
  return s;
}

}  // namespace detail

/// Boundary of the transported candidate as a Gaussian-side quadrature
/// cloud. Supported: axis slab (any d <= 6), vertex ball (d = 2, 3) and
/// edge cylinder (d = 3).
inline SurfaceSample transported_candidate_surface(const CandidateSpec& c,
                                                   int resolution,
                                                   double extent = 8.0) {
  const double lambda = c.volume;
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("transported_candidate_surface: volume must lie in (0,1)");
  switch (c.family) {
    case CandidateFamily::axis_slab: {
      const int axis = std::abs(c.direction) - 1;
      if (axis < 0 || axis >= c.dimension)
        throw std::invalid_argument("transported_candidate_surface: bad slab axis");
      Eigen::VectorXd n = Eigen::VectorXd::Zero(c.dimension);
      n[axis] = c.direction > 0 ? 1.0 : -1.0;
      return analytic_halfspace_surface({n, std_normal_quantile(lambda)},
                                        c.dimension, extent, resolution);
    }
    case CandidateFamily::vertex_ball: {
      if (c.dimension == 2) {
        const double r = vertex_ball_radius(2, lambda);
        detail::CubePatch p;
        p.dim = 2;
        p.params = 1;
        p.lo = Eigen::VectorXd::Zero(1);
        p.hi = Eigen::VectorXd::Constant(1, M_PI / 2.0);
        p.value = [r](const Eigen::VectorXd& u) {
          return Eigen::Vector2d(r * std::cos(u[0]), r * std::sin(u[0]));
        };
        p.jacobian = [r](const Eigen::VectorXd& u) {
          Eigen::MatrixXd j(2, 1);
          j << -r * std::sin(u[0]), r * std::cos(u[0]);
          return j;
        };
        return detail::transport_patch(p, resolution);
      }
      if (c.dimension == 3) {
        const double r = vertex_ball_radius(3, lambda);
        detail::CubePatch p;
        p.dim = 3;
        p.params = 2;
        p.lo = Eigen::VectorXd::Zero(2);
        p.hi = Eigen::VectorXd::Constant(2, M_PI / 2.0);
        p.value = [r](const Eigen::VectorXd& u) {
          return Eigen::Vector3d(r * std::sin(u[1]) * std::cos(u[0]),
                                 r * std::sin(u[1]) * std::sin(u[0]),
                                 r * std::cos(u[1]));
        };
        p.jacobian = [r](const Eigen::VectorXd& u) {
          Eigen::MatrixXd j(3, 2);
          j << -r * std::sin(u[1]) * std::sin(u[0]),
              r * std::cos(u[1]) * std::cos(u[0]),
              r * std::sin(u[1]) * std::cos(u[0]),
              r * std::cos(u[1]) * std::sin(u[0]), 0.0, -r * std::sin(u[1]);
          return j;
        };
        return detail::transport_patch(p, resolution);
      }
      throw std::domain_error(
          "transported_candidate_surface: vertex ball supported for d in {2,3}");
    }
    case CandidateFamily::edge_cylinder: {
      if (c.dimension != 3)
        throw std::domain_error("transported_candidate_surface: edge cylinder needs d=3");
      const double r = std::sqrt(4.0 * lambda / M_PI);
      detail::CubePatch p;
      p.dim = 3;
      p.params = 2;
      p.lo = Eigen::VectorXd::Zero(2);
      p.hi.resize(2);
      p.hi << M_PI / 2.0, 1.0;
      p.value = [r](const Eigen::VectorXd& u) {
        return Eigen::Vector3d(r * std::cos(u[0]), r * std::sin(u[0]), u[1]);
      };
      p.jacobian = [r](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(3, 2);
        j << -r * std::sin(u[0]), 0.0, r * std::cos(u[0]), 0.0, 0.0, 1.0;
        return j;
      };
      return detail::transport_patch(p, resolution);
    }
    default:
      throw std::domain_error(
          "transported_candidate_surface: unsupported candidate family");
  }
}

/// Cube-relative perimeter of a supported candidate, in closed form.
inline double candidate_cube_perimeter(const CandidateSpec& c) {
  const double lambda = c.volume;
  switch (c.family) {
    case CandidateFamily::axis_slab:
      return slab_perimeter(c.dimension, lambda);
    case CandidateFamily::vertex_ball: {
      const double r = vertex_ball_radius(c.dimension, lambda);
      if (c.dimension == 2) return M_PI * r / 2.0;
      if (c.dimension == 3) return M_PI * r * r / 2.0;
      throw std::domain_error("candidate_cube_perimeter: vertex ball d in {2,3}");
    }
    case CandidateFamily::edge_cylinder:
      return M_PI * std::sqrt(4.0 * lambda / M_PI) / 2.0;
    default:
      throw std::domain_error("candidate_cube_perimeter: unsupported family");
  }
}

/// Checks the identity (1/sqrt(2*pi)) Per(E,(0,1)^d) = Per_gamma(F) + penalty
/// for the transported candidate F. Axis slabs use the closed form
/// pdf(t) e^{t^2/2} unless quadrature is forced.
inline BoundReport decomposition_check(const CandidateSpec& c, double lambda,
                                       int resolution = 2048,
                                       bool force_quadrature = false) {
  CandidateSpec spec = c;
  spec.volume = lambda;
  const double lhs = candidate_cube_perimeter(spec) / kSqrt2Pi;
  double rhs;
  if (spec.family == CandidateFamily::axis_slab && !force_quadrature) {
    const double t = std_normal_quantile(lambda);
    rhs = std_normal_pdf(t) * std::exp(0.5 * t * t);
  } else {
    rhs = penalized_functional(transported_candidate_surface(spec, resolution))
              .total;
  }
  return make_report(lhs, rhs, spec.describe());
}

/// Penalty component of the decomposition for a candidate (quadrature for
/// curved families, closed form for slabs).
inline double decomposition_penalty(const CandidateSpec& c, int resolution = 2048) {
  if (c.family == CandidateFamily::axis_slab) {
    const double t = std_normal_quantile(c.volume);
    return std_normal_pdf(t) * (std::exp(0.5 * t * t) - 1.0);
  }
  return penalized_functional(transported_candidate_surface(c, resolution))
      .penalty;
}

/// Kolmogorov-Smirnov statistic of a sample against U(0,1).
inline double ks_statistic_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::clamp(values[i], 0.0, 1.0);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

/// Per-coordinate KS statistics of to_cube applied to n Gaussian samples.
inline Eigen::VectorXd pushforward_ks_test(int d, long n, std::uint64_t seed) {
  if (n < 1000)
    throw std::domain_error("pushforward_ks_test: n must be >= 1000");
  const Eigen::MatrixXd samples = sample_gaussian(d, n, seed);
  Eigen::VectorXd stats(d);
  for (int i = 0; i < d; ++i) {
    std::vector<double> u(n);
    for (long j = 0; j < n; ++j) u[j] = std_normal_cdf(samples(i, j));
    stats[i] = ks_statistic_uniform(std::move(u));
  }
  return stats;
}

/// Monte Carlo estimate of the area scaling of A restricted to nu-perp,
/// independent of the determinant formula: the unit prism over a unit
/// (d-1)-cube in nu-perp is pushed through A, its volume estimated by
/// rejection sampling in a bounding box, and divided by the image prism's
/// thickness (the component of A nu orthogonal to A(nu-perp)).
inline double restriction_jacobian_mc(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& nu, long samples,
                                      std::uint64_t seed) {
  const Eigen::Index d = A.rows();
  const Eigen::MatrixXd Q = orthonormal_completion(nu);  // col 0 == nu
  const Eigen::MatrixXd B = Q.rightCols(d - 1);
  const Eigen::MatrixXd M = A * B;
  const Eigen::VectorXd w = A * nu;
  const Eigen::VectorXd w_perp =
      w - M * (M.transpose() * M).ldlt().solve(M.transpose() * w);
  const double thickness = w_perp.norm();

  // Bounding box from the 2^d corners of the image parallelepiped.
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, 0.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(d, 0.0);
  for (long mask = 0; mask < (1L << d); ++mask) {
    Eigen::VectorXd corner = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d - 1; ++i)
      if (mask & (1L << i)) corner += M.col(i);
    if (mask & (1L << (d - 1))) corner += w;
    lo = lo.cwiseMin(corner);
    hi = hi.cwiseMax(corner);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  CounterRng rng(seed);
  long hits = 0;
  for (long k = 0; k < samples; ++k) {
    Eigen::VectorXd y(d);
    for (Eigen::Index i = 0; i < d; ++i)
      y[i] = rng.next_uniform(lo[i], hi[i]);
    const Eigen::VectorXd coords = Q.transpose() * lu.solve(y);
    bool inside = coords[0] > 0.0 && coords[0] < 1.0;
    for (Eigen::Index i = 1; inside && i < d; ++i)
      inside = coords[i] > 0.0 && coords[i] < 1.0;
    if (inside) ++hits;
  }
  double box = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) box *= hi[i] - lo[i];
  const double volume = box * static_cast<double>(hits) / samples;
  return volume / thickness;
}

}  // namespace isocube
