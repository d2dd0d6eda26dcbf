#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isocube/gaussian.hpp"
#include "isocube/report.hpp"
#include "isocube/transport.hpp"

namespace isocube {

/// Soft threshold: vanishes on [-kappa, kappa], shifts by kappa outside.
inline double soft_threshold(double s, double kappa) {
  if (!(kappa >= 0.0)) throw std::domain_error("soft_threshold: kappa must be >= 0");
  if (s <= -kappa) return s + kappa;
  if (s >= kappa) return s - kappa;
  return 0.0;
}

/// Gap in the Jensen step: sqrt(sum nu_i^2 e^{x_i^2}) - 1 minus
/// sum nu_i^2 (e^{x_i^2/2} - 1). Nonnegative since sqrt(.)-1 is concave and
/// the nu_i^2 are weights summing to one.
inline double jensen_gap(const Eigen::VectorXd& nu, const Eigen::VectorXd& x) {
  if (nu.size() != x.size())
    throw std::invalid_argument("jensen_gap: shape mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("jensen_gap: nu must be unit");
  const auto nu2 = nu.array().square();
  const auto x2 = x.array().square();
  const double lhs = std::sqrt((nu2 * x2.exp()).sum()) - 1.0;
  const double rhs = (nu2 * ((0.5 * x2).exp() - 1.0)).sum();
  return lhs - rhs;
}

/// sum |u_i^2 - v_i^2| <= |u - v| |u + v| (Cauchy-Schwarz).
inline BoundReport cs_pointwise(const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cs_pointwise: length mismatch");
  const double lhs = (u.array().square() - v.array().square()).abs().sum();
  const double rhs = (u - v).norm() * (u + v).norm();
  return make_report(rhs, lhs, "cs_pointwise d=" + std::to_string(u.size()));
}

/// min{1, (|quantile(lambda)| / 4)^4}; zero exactly at lambda = 1/2, capped
/// at 1 toward the endpoints.
inline double delta_threshold(double lambda) {
  if (lambda == 0.0 || lambda == 1.0) return 1.0;
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("delta_threshold: lambda must lie in [0,1]");
  // Evaluate on the lower half so complementary volumes agree.
  const double m = std::min(lambda, 1.0 - lambda);
  const double t = std::abs(std_normal_quantile(m)) / 4.0;
  return std::min(1.0, t * t * t * t);
}

/// pdf(l) * gamma_1({t : |q*l + sqrt(1-q^2)*t| < l/2}): the weighted mass a
/// tilted hyperplane at distance l places inside the slab {|x_i| < l/2}.
inline double strip_mass(double l, double q) {
  if (!(l > 0.0)) throw std::domain_error("strip_mass: l must be > 0");
  if (!(q >= -1.0 && q <= 1.0))
    throw std::domain_error("strip_mass: q must lie in [-1,1]");
  const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
  if (s == 0.0) return 0.0;  // empty interval
  const double a = (-0.5 * l - q * l) / s;
  const double b = (0.5 * l - q * l) / s;
  return std_normal_pdf(l) * (std_normal_cdf(b) - std_normal_cdf(a));
}

/// c(l) = pdf(l) - max_q strip_mass(l, q): the positive defect by which a
/// hyperplane at distance l fails to fit inside the slab. 2048-point grid
/// plus golden-section refinement to 1e-10 in q.
inline double strip_constant(double l) {
  if (!(l > 0.0)) throw std::domain_error("strip_constant: l must be > 0");
  const int grid = 2048;
  double best_q = 0.0, best = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double q = -1.0 + 2.0 * i / grid;
    const double m = strip_mass(l, q);
    if (m > best) {
      best = m;
      best_q = q;
    }
  }
  double lo = std::max(-1.0, best_q - 2.0 / grid);
  double hi = std::min(1.0, best_q + 2.0 / grid);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = strip_mass(l, x1), f2 = strip_mass(l, x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = strip_mass(l, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = strip_mass(l, x1);
    }
  }
  return std_normal_pdf(l) - std::max(best, std::max(f1, f2));
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace detail

/// Checks the strip lower bound: for a hyperplane Sigma at distance l
/// (tilt q between e_i and the normal), a Borel subset V missing weighted
/// mass V_deficit (removed adversarially where f is largest), and a
/// nondecreasing f, integral of f(|x_i|) over V >= (c(l) - V_deficit) f(l/2).
inline BoundReport strip_bound_check(double l, double q, double v_deficit,
                                     const std::function<double(double)>& f) {
  if (!(l > 0.0)) throw std::domain_error("strip_bound_check: l must be > 0");
  if (!(v_deficit >= 0.0))
    throw std::domain_error("strip_bound_check: V_deficit must be >= 0");
  // Precondition probe: f nondecreasing on [0, 12].
  double prev = f(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double cur = f(i * 0.03);
    if (cur < prev - 1e-12)
      throw std::invalid_argument("strip_bound_check: f is not nondecreasing");
    prev = cur;
  }

  const double total = std_normal_pdf(l);
  const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
  std::ostringstream cfg;
  cfg << "strip_bound l=" << l << " q=" << q << " deficit=" << v_deficit;

  double lhs = 0.0;
  if (v_deficit < total) {
    if (s == 0.0) {
      // Degenerate tilt: |x_i| = l on all of Sigma.
      lhs = (total - v_deficit) * f(l);
    } else {
      // Remove the tail {|x_i| > y*} of weighted mass v_deficit.
      auto kept_mass = [&](double y) {
        const double a = (-y - q * l) / s, b = (y - q * l) / s;
        return total * (std_normal_cdf(b) - std_normal_cdf(a));
      };
      double ylo = 0.0, yhi = 1e9;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (ylo + yhi);
        (total - kept_mass(mid) > v_deficit ? ylo : yhi) = mid;
      }
      const double ystar = 0.5 * (ylo + yhi);
      // Clip to where the gaussian weight lives; dropping kept set beyond
      // |t| = 14 only lowers the left-hand side.
      double ta = (-ystar - q * l) / s, tb = (ystar - q * l) / s;
      ta = std::max(ta, -14.0);
      tb = std::min(tb, 14.0);
      if (tb > ta)
        lhs = total * detail::simpson(
                          [&](double t) {
                            return f(std::abs(q * l + s * t)) * std_normal_pdf(t);
                          },
                          ta, tb, 40000);
    }
  }
  const double rhs = (strip_constant(l) - v_deficit) * f(0.5 * l);
  return make_report(lhs, rhs, cfg.str());
}

// ---------------------------------------------------------------------------
// Slicing bound (projection of the reduced boundary within a strip).
// ---------------------------------------------------------------------------

/// Graph offset along the hyperplane, varying in a single tangential
/// coordinate: clamp(sum a_k cos(w_k y + p_k), +-bound).
struct GraphPerturbation {
  struct Wave {
    double amplitude = 0.0, frequency = 1.0, phase = 0.0;
  };
  std::vector<Wave> waves;
  double bound = 0.0;

  double operator()(double y) const {
    double g = 0.0;
    for (const auto& w : waves)
      g += w.amplitude * std::cos(w.frequency * y + w.phase);
    return std::clamp(g, -bound, bound);
  }
};

/// F as a measurable modification of the half-space H: along each normal
/// line over base point y, the slice is (-inf, g(y)) minus the carved slabs
/// (intervals in the signed normal coordinate, H side negative).
struct SlicingConfig {
  double ell = 1.0;  // dist(0, boundary of H)
  double r = 0.25;   // strip half-width
  GraphPerturbation graph;
  std::vector<std::pair<double, double>> carves;  // disjoint (a, b)
  std::uint64_t seed = 0;

  std::string describe() const {
    std::ostringstream os;
    os << "slicing l=" << ell << " r=" << r << " waves=" << graph.waves.size()
       << " carves=" << carves.size();
    return os.str();
  }
};

namespace detail {

// Finite boundary points of the slice (-inf, g) \ union of carves.
inline void slice_boundary(double g,
                           const std::vector<std::pair<double, double>>& carves,
                           std::vector<double>& out) {
  out.clear();
  bool g_inside_carve = false;
  for (const auto& [a, b] : carves) {
    if (b < g) {
      out.push_back(a);
      out.push_back(b);
    } else if (a < g) {
      out.push_back(a);  // slice truncated at a; g swallowed by the carve
      g_inside_carve = true;
    }
  }
  if (!g_inside_carve) out.push_back(g);
}

inline bool boundary_hits_strip(double g,
                                const std::vector<std::pair<double, double>>& carves,
                                double r) {
  static thread_local std::vector<double> pts;
  slice_boundary(g, carves, pts);
  for (double t : pts)
    if (std::abs(t) < r) return true;
  return false;
}

// Intervals of the slice as a finite union, clipped below at tmin.
inline std::vector<std::pair<double, double>> slice_intervals(
    double g, const std::vector<std::pair<double, double>>& carves, double tmin) {
  std::vector<std::pair<double, double>> iv{{tmin, g}};
  for (const auto& [a, b] : carves) {
    std::vector<std::pair<double, double>> next;
    for (auto [lo, hi] : iv) {
      if (b <= lo || a >= hi) {
        next.emplace_back(lo, hi);
        continue;
      }
      if (a > lo) next.emplace_back(lo, std::min(a, hi));
      if (b < hi) next.emplace_back(std::max(b, lo), hi);
    }
    iv.swap(next);
  }
  return iv;
}

// gamma_1 mass of the slice symmetric difference against (-inf, 0), along
// the normal line with density pdf(l + t) / pdf(l).
inline double slice_sym_diff_mass(double g,
                                  const std::vector<std::pair<double, double>>& carves,
                                  double l) {
  const double tmin = -l - 40.0;
  auto iv = slice_intervals(g, carves, tmin);
  // Symmetric difference of iv against (tmin, 0) on the line.
  auto weight = [l](double a, double b) {
    return std_normal_cdf(l + b) - std_normal_cdf(l + a);
  };
  double inter = 0.0, mass_f = 0.0;
  for (auto [a, b] : iv) {
    mass_f += weight(a, b);
    const double ia = std::max(a, tmin), ib = std::min(b, 0.0);
    if (ib > ia) inter += weight(ia, ib);
  }
  const double mass_h = weight(tmin, 0.0);
  return (mass_f - inter) + (mass_h - inter);
}

}  // namespace detail

/// Checks the projection bound: the weighted measure of the projection of
/// the reduced boundary within the strip {dist(., boundary of H) < r} onto
/// the hyperplane is at least pdf(l) - (pdf(l)/pdf(l+r)) * gamma(F sym H)/r.
inline BoundReport slicing_bound(const SlicingConfig& cfg) {
  if (!(cfg.r > 0.0)) throw std::domain_error("slicing_bound: r must be > 0");
  if (!(cfg.ell > 0.0)) throw std::domain_error("slicing_bound: ell must be > 0");
  for (std::size_t i = 0; i < cfg.carves.size(); ++i) {
    if (!(cfg.carves[i].first < cfg.carves[i].second))
      throw std::invalid_argument("slicing_bound: empty carve interval");
    if (i > 0 && !(cfg.carves[i].first >= cfg.carves[i - 1].second))
      throw std::invalid_argument("slicing_bound: carves must be disjoint and sorted");
  }
  const double l = cfg.ell;
  const double Y = 8.5;
  const int N = 20000;  // membership scan resolution in the tangential coord
  const double h = 2.0 * Y / N;

  // Projection measure: integrate pdf(y) over {y : slice boundary meets
  // (-r, r)}, with membership transitions refined by bisection.
  double proj = 0.0;
  auto member = [&](double y) {
    return detail::boundary_hits_strip(cfg.graph(y), cfg.carves, cfg.r);
  };
  bool prev = member(-Y);
  double open_at = prev ? -Y : 0.0;
  bool open = prev;
  for (int i = 1; i <= N; ++i) {
    const double y = -Y + i * h;
    const bool cur = member(y);
    if (cur != prev) {
      double a = y - h, b = y;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (a + b);
        (member(mid) == prev ? a : b) = mid;
      }
      const double cross = 0.5 * (a + b);
      if (open) {
        proj += std_normal_cdf(cross) - std_normal_cdf(open_at);
        open = false;
      } else {
        open_at = cross;
        open = true;
      }
      prev = cur;
    }
  }
  if (open) proj += std_normal_cdf(Y) - std_normal_cdf(open_at);
  const double lhs = std_normal_pdf(l) * proj;

  // gamma_d(F sym H) via Fubini along normal lines; the slice mass already
  // carries the pdf(l + t) density, so only the tangential weight remains.
  const double sym = detail::simpson(
      [&](double y) {
        return std_normal_pdf(y) *
               detail::slice_sym_diff_mass(cfg.graph(y), cfg.carves, l);
      },
      -Y, Y, N);
  const double rhs =
      std_normal_pdf(l) -
      std_normal_pdf(l) / std_normal_pdf(l + cfg.r) * sym / cfg.r;
  BoundReport rep = make_report(lhs, rhs, cfg.describe(), cfg.seed);
  return rep;
}

/// Gaussian isoperimetric margin Per_gamma - I_gamma(lambda) for a
/// half-space (closed form, zero) or a sampled surface (quadrature).
inline BoundReport gaussian_isoperimetry_margin(const HalfspaceSpec& h,
                                                double lambda) {
  const double implied = std_normal_cdf(h.offset);
  if (std::abs(implied - lambda) > 1e-9)
    throw std::invalid_argument(
        "gaussian_isoperimetry_margin: lambda inconsistent with offset");
  return make_report(std_normal_pdf(h.offset), gaussian_profile(lambda),
                     "halfspace offset=" + std::to_string(h.offset));
}

inline BoundReport gaussian_isoperimetry_margin(const SurfaceSample& surface,
                                                double lambda) {
  double per = 0.0;
  for (Eigen::Index k = 0; k < surface.size(); ++k)
    per += surface.weights[k] * gaussian_density_d(surface.points.col(k));
  return make_report(per, gaussian_profile(lambda), "surface sample");
}

}  // namespace isocube
