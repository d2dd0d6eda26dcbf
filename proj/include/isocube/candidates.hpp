#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "isocube/gaussian.hpp"
#include "isocube/profile_curve.hpp"

namespace isocube {

enum class CandidateFamily { axis_slab, vertex_ball, edge_cylinder, product_lift };

inline const char* to_string(CandidateFamily f) {
  switch (f) {
    case CandidateFamily::axis_slab: return "axis_slab";
    case CandidateFamily::vertex_ball: return "vertex_ball";
    case CandidateFamily::edge_cylinder: return "edge_cylinder";
    case CandidateFamily::product_lift: return "product_lift";
  }
  return "?";
}

/// Symbolic description of a candidate set inside the cube.
struct CandidateSpec {
  CandidateFamily family = CandidateFamily::axis_slab;
  int dimension = 1;
  double volume = 0.5;
  // Slabs: signed axis, 1-based; +k means {x_k < volume}, -k its mirror.
  int direction = +1;
  std::shared_ptr<CandidateSpec> base;  // product_lift only

  std::string describe() const {
    return std::string(to_string(family)) + " d=" + std::to_string(dimension) +
           " lambda=" + std::to_string(volume);
  }
};

/// Volume of the unit ball, pi^(d/2) / Gamma(d/2 + 1).
inline double unit_ball_volume(int d) {
  if (d < 1) throw std::domain_error("unit_ball_volume: d must be >= 1");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Cube-relative perimeter of the axis slab {x_1 < lambda}: the flat
/// cross-section has area 1 for every interior volume.
inline double slab_perimeter(int d, double lambda) {
  if (d < 1) throw std::domain_error("slab_perimeter: d must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("slab_perimeter: lambda must lie in [0,1]");
  return (lambda == 0.0 || lambda == 1.0) ? 0.0 : 1.0;
}

inline CandidateSpec make_slab(int d, double lambda, int direction = +1) {
  return CandidateSpec{CandidateFamily::axis_slab, d, lambda, direction, nullptr};
}

/// Radius of the ball at a vertex enclosing cube volume lambda.
inline double vertex_ball_radius(int d, double lambda) {
  return std::pow(std::pow(2.0, d) * lambda / unit_ball_volume(d), 1.0 / d);
}

/// (d/2)|B_1|^(1/d) lambda^((d-1)/d), valid while the ball fits in the
/// corner (radius <= 1). Returns nullopt past the fit bound; the true
/// validity threshold lambda_0(d) is smaller but has no closed form.
inline std::optional<double> vertex_ball_perimeter(int d, double lambda) {
  if (d < 1) throw std::domain_error("vertex_ball_perimeter: d must be >= 1");
  if (!(lambda > 0.0)) throw std::domain_error("vertex_ball_perimeter: lambda must be > 0");
  if (vertex_ball_radius(d, lambda) > 1.0 + 1e-15) return std::nullopt;
  return 0.5 * d * std::pow(unit_ball_volume(d), 1.0 / d) *
         std::pow(lambda, (d - 1.0) / d);
}

/// Quarter-cylinder along a cube edge, d=3 only: lateral area sqrt(pi*lambda)
/// while the radius sqrt(4*lambda/pi) fits.
inline std::optional<double> edge_cylinder_perimeter(double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("edge_cylinder_perimeter: lambda must be > 0");
  if (std::sqrt(4.0 * lambda / M_PI) > 1.0 + 1e-15) return std::nullopt;
  return std::sqrt(M_PI * lambda);
}

/// Known profile of the square: quarter-disk branch then the flat slab.
inline double exact_profile_2d(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("exact_profile_2d: lambda must lie in [0,1]");
  const double m = std::min(lambda, 1.0 - lambda);
  if (m == 0.0) return 0.0;
  return std::min(std::sqrt(M_PI * m), 1.0);
}

/// Conjectural profile of (0,1)^3: min over vertex ball, edge cylinder and
/// slab branches, symmetrized by complement.
inline double conjectural_profile_3d(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("conjectural_profile_3d: lambda must lie in [0,1]");
  const double m = std::min(lambda, 1.0 - lambda);
  if (m == 0.0) return 0.0;
  double v = 1.0;
  if (auto b = vertex_ball_perimeter(3, m)) v = std::min(v, *b);
  if (auto c = edge_cylinder_perimeter(m)) v = std::min(v, *c);
  return v;
}

/// Barthe-Maurey bound sqrt(2*pi) * I_gamma(lambda).
inline double lower_bound_profile(double lambda) {
  return kSqrt2Pi * gaussian_profile(lambda);
}

/// E -> E x (0,1) preserves volume and relative perimeter, so a profile
/// curve transfers unchanged one dimension up (as an upper bound).
inline ProfileCurve lift_product(const ProfileCurve& curve) {
  if (curve.dimension == ProfileCurve::kInfiniteDim)
    throw std::domain_error("lift_product: dimension must be finite");
  ProfileCurve out = curve;
  out.dimension = curve.dimension + 1;
  return out;
}

/// Pointwise min over every family valid in dimension d, including product
/// lifts of lower-dimensional candidates. Lifting makes the vertex balls of
/// every dimension k <= d compete (the d=3 edge cylinder is the lift of the
/// 2-d vertex ball, and similarly upward).
inline double candidate_envelope_value(int d, double lambda) {
  if (d < 1 || d > 16)
    throw std::domain_error("candidate_envelope: d must lie in 1..16");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("candidate_envelope: lambda must lie in [0,1]");
  const double m = std::min(lambda, 1.0 - lambda);
  if (m == 0.0) return 0.0;
  double v = 1.0;
  for (int k = 2; k <= d; ++k)
    if (auto b = vertex_ball_perimeter(k, m)) v = std::min(v, *b);
  return v;
}

inline ProfileCurve candidate_envelope(int d, const std::vector<double>& grid) {
  ProfileCurve c;
  c.dimension = d;
  c.provenance = (d <= 2) ? Provenance::exact : Provenance::candidate;
  c.lambdas = grid;
  c.values.reserve(grid.size());
  for (double l : grid) c.values.push_back(candidate_envelope_value(d, l));
  return c;
}

}  // namespace isocube
