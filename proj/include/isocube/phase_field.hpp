#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocube/candidates.hpp"
#include "isocube/profile_curve.hpp"
#include "isocube/rng.hpp"

namespace isocube {

inline constexpr double kWellConstant = 0.23570226039551587;  // sqrt(2)/6

/// Nodal values in [0,1] on a uniform cell-centered grid over (0,1)^d.
struct PhaseField {
  int dimension = 2;
  int grid_n = 64;
  Eigen::VectorXd values;
  double epsilon = 0.0;

  long nodes() const { return values.size(); }
  double spacing() const { return 1.0 / grid_n; }
  double volume() const { return values.mean(); }
};

enum class InitMode { slab, corner_ball, random, voxel_warm_start };

struct OptimizerConfig {
  std::vector<double> epsilon_schedule;  // empty: {8h, 4h, 2h, 1.5h}
  double step_size = 0.0;                // 0: stability-limited default
  int max_iterations = 2000;             // per epsilon stage
  double volume_tolerance = 1e-3;
  double stagnation_tolerance = 1e-6;
  std::uint64_t seed = 0;
  InitMode init = InitMode::slab;
  Eigen::VectorXd warm_start;  // used when init == voxel_warm_start
};

struct OptimizerDiagnostics {
  bool converged = false;
  long iterations = 0;
  double final_volume = 0.0;
  double final_epsilon = 0.0;
  int grid_n = 0;
};

struct MinimizeResult {
  double estimate = 0.0;
  PhaseField field;
  OptimizerDiagnostics diagnostics;
};

namespace detail {

inline long node_count(int dim, int n) {
  long c = 1;
  for (int a = 0; a < dim; ++a) c *= n;
  return c;
}

inline std::vector<long> node_strides(int dim, int n) {
  std::vector<long> s(dim, 1);
  for (int a = 1; a < dim; ++a) s[a] = s[a - 1] * n;
  return s;
}

// Zero-flux Laplacian (mirrored neighbors), PDE scaling 1/h^2.
inline void neumann_laplacian(const PhaseField& f, Eigen::VectorXd& out) {
  const int d = f.dimension, n = f.grid_n;
  const auto strides = node_strides(d, n);
  const double inv_h2 = double(n) * double(n);
  out.setZero(f.nodes());
  for (long i = 0; i < f.nodes(); ++i) {
    double acc = 0.0;
    for (int a = 0; a < d; ++a) {
      const long c = (i / strides[a]) % n;
      const double u = f.values[i];
      acc += ((c + 1 < n) ? f.values[i + strides[a]] : u) - u;
      acc += ((c > 0) ? f.values[i - strides[a]] : u) - u;
    }
    out[i] = acc * inv_h2;
  }
}

// Shift-and-clamp projection onto the volume constraint.
inline void project_volume(Eigen::VectorXd& u, double lambda) {
  auto vol = [&](double c) {
    return u.unaryExpr([c](double v) { return std::clamp(v + c, 0.0, 1.0); })
        .mean();
  };
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (vol(mid) < lambda ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  u = u.unaryExpr([c](double v) { return std::clamp(v + c, 0.0, 1.0); });
}

}  // namespace detail

/// Scaled interface energy: sum over cells of
/// (eps/2)|grad u|^2 + u^2(1-u)^2/eps, times cell volume, divided by
/// sqrt(2)/6 so the sharp-interface limit is the relative perimeter.
/// One-sided differences at the cube faces encode the free boundary.
inline double relaxed_energy(const PhaseField& f) {
  const int d = f.dimension, n = f.grid_n;
  const auto strides = detail::node_strides(d, n);
  const double h = f.spacing();
  const double cell = std::pow(h, d);
  double grad2 = 0.0, well = 0.0;
  for (long i = 0; i < f.nodes(); ++i) {
    const double u = f.values[i];
    well += u * u * (1.0 - u) * (1.0 - u);
    for (int a = 0; a < d; ++a) {
      const long c = (i / strides[a]) % n;
      if (c + 1 < n) {
        const double du = (f.values[i + strides[a]] - u) / h;
        grad2 += du * du;
      }
    }
  }
  const double energy = (0.5 * f.epsilon * grad2 + well / f.epsilon) * cell;
  return energy / kWellConstant;
}

/// Volume-preserving threshold dynamics: a short zero-flux heat flow
/// followed by thresholding at the level whose superlevel set has volume
/// lambda. Keeps the best-energy iterate, so the returned field never beats
/// the input by less than -stagnation_tolerance.
inline PhaseField threshold_refine(const PhaseField& input, double lambda,
                                   int steps,
                                   double stagnation_tolerance = 1e-6) {
  PhaseField f = input;
  const int d = f.dimension, n = f.grid_n;
  const double h = f.spacing();
  const double dt = h * h / (4.0 * d);
  const int heat_steps =
      std::max(1, static_cast<int>(std::ceil(0.5 * f.epsilon * f.epsilon / dt)));
  const long k = std::clamp<long>(std::lround(lambda * f.nodes()), 0, f.nodes());

  auto threshold = [&](PhaseField& g) {
    std::vector<double> sorted(g.values.data(), g.values.data() + g.nodes());
    std::nth_element(sorted.begin(), sorted.begin() + (g.nodes() - k),
                     sorted.end());
    const double level = (k == 0) ? 2.0 : sorted[g.nodes() - k];
    long above = 0;
    for (long i = 0; i < g.nodes(); ++i)
      if (g.values[i] > level) ++above;
    // Cells at the threshold level fill the remaining budget in index order.
    long ties = k - above;
    for (long i = 0; i < g.nodes(); ++i) {
      bool on = g.values[i] > level;
      if (!on && g.values[i] == level && ties > 0) {
        on = true;
        --ties;
      }
      g.values[i] = on ? 1.0 : 0.0;
    }
  };

  threshold(f);
  PhaseField best = f;
  double best_energy = relaxed_energy(best);
  Eigen::VectorXd lap;
  for (int s = 0; s < steps; ++s) {
    for (int m = 0; m < heat_steps; ++m) {
      detail::neumann_laplacian(f, lap);
      f.values += dt * lap;
    }
    threshold(f);
    const double e = relaxed_energy(f);
    if (e < best_energy) {
      best_energy = e;
      best = f;
    } else if (e > best_energy + stagnation_tolerance) {
      break;  // threshold dynamics stagnated on this grid
    }
  }
  return best;
}

namespace detail {

inline PhaseField initial_field(int d, int n, double lambda, double eps,
                                const OptimizerConfig& cfg) {
  PhaseField f;
  f.dimension = d;
  f.grid_n = n;
  f.epsilon = eps;
  f.values.resize(node_count(d, n));
  const auto strides = node_strides(d, n);
  const double h = 1.0 / n;
  auto logistic = [](double s) { return 1.0 / (1.0 + std::exp(s)); };
  switch (cfg.init) {
    case InitMode::slab:
      for (long i = 0; i < f.nodes(); ++i) {
        const double x1 = ((i % n) + 0.5) * h;
        f.values[i] = logistic(std::sqrt(2.0) * (x1 - lambda) / eps);
      }
      break;
    case InitMode::corner_ball: {
      double r = vertex_ball_radius(d, lambda);
      if (r > 1.0) r = std::pow(lambda, 1.0 / d);  // fallback, projection fixes volume
      for (long i = 0; i < f.nodes(); ++i) {
        double rho2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double xa = ((i / strides[a]) % n + 0.5) * h;
          rho2 += xa * xa;
        }
        f.values[i] = logistic(std::sqrt(2.0) * (std::sqrt(rho2) - r) / eps);
      }
      break;
    }
    case InitMode::random: {
      CounterRng rng(cfg.seed);
      for (long i = 0; i < f.nodes(); ++i) f.values[i] = rng.next_open01();
      break;
    }
    case InitMode::voxel_warm_start:
      if (cfg.warm_start.size() != f.nodes())
        throw std::invalid_argument("minimize: warm start size mismatch");
      f.values = cfg.warm_start;
      break;
  }
  project_volume(f.values, lambda);
  return f;
}

// Projected gradient descent at fixed epsilon; returns iterations used.
inline long relax_stage(PhaseField& f, double lambda,
                        const OptimizerConfig& cfg) {
  const int d = f.dimension;
  const double h = f.spacing();
  const double eps = f.epsilon;
  const double tau = cfg.step_size > 0.0
                         ? cfg.step_size
                         : 1.5 / (4.0 * d * eps / (h * h) + 4.0 / eps);
  Eigen::VectorXd lap;
  double last_energy = relaxed_energy(f);
  long it = 0;
  for (; it < cfg.max_iterations; ++it) {
    detail::neumann_laplacian(f, lap);
    for (long i = 0; i < f.nodes(); ++i) {
      const double u = f.values[i];
      const double wprime = 2.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
      f.values[i] = u + tau * (eps * lap[i] - wprime / eps);
    }
    project_volume(f.values, lambda);
    if ((it + 1) % 50 == 0) {
      const double e = relaxed_energy(f);
      if (last_energy - e < cfg.stagnation_tolerance * std::max(1.0, e)) {
        ++it;
        break;
      }
      last_energy = e;
    }
  }
  return it;
}

// Minimal normalized energy of one discrete 1-D transition at interface
// width ratio = eps/h. Dividing measured energies by this removes the
// systematic bias of the finite-width discrete profile, so a flat interface
// measures exactly its area. The discrete energy is pinned to the grid with
// period one cell, so the minimum is taken over sub-cell interface offsets.
inline double interface_calibration(double ratio) {
  static std::map<double, double> cache;
  const auto it = cache.find(ratio);
  if (it != cache.end()) return it->second;
  const int n = 1001;
  OptimizerConfig cfg;
  cfg.max_iterations = 20000;
  cfg.stagnation_tolerance = 1e-13;
  double e = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 8; ++s) {
    PhaseField f;
    f.dimension = 1;
    f.grid_n = n;
    f.epsilon = ratio / n;
    f.values.resize(n);
    const double lambda = (500.5 + s / 8.0) / n;
    for (long i = 0; i < f.nodes(); ++i) {
      const double x = (i + 0.5) * f.spacing();
      f.values[i] =
          1.0 / (1.0 + std::exp(std::sqrt(2.0) * (x - lambda) / f.epsilon));
    }
    relax_stage(f, lambda, cfg);
    e = std::min(e, relaxed_energy(f));
  }
  cache.emplace(ratio, e);
  return e;
}

}  // namespace detail

/// Numerical upper bound on the relative isoperimetric profile at volume
/// lambda: Modica-Mortola continuation over the epsilon schedule, threshold
/// dynamics, and a final relaxation at the smallest epsilon to restore the
/// optimal interface profile before measuring the energy.
inline MinimizeResult minimize(int d, double lambda, int grid_n,
                               OptimizerConfig cfg = {}) {
  if (d < 1 || d > 4) throw std::domain_error("minimize: d must lie in 1..4");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("minimize: volume must lie in (0,1)");
  const long nodes = detail::node_count(d, grid_n);
  if (nodes > (1L << 24)) throw std::domain_error("minimize: grid too large (2^24 node cap)");

  const double h = 1.0 / grid_n;
  if (cfg.epsilon_schedule.empty())
    cfg.epsilon_schedule = {8.0 * h, 4.0 * h, 2.0 * h, 1.5 * h};
  for (std::size_t i = 0; i + 1 < cfg.epsilon_schedule.size(); ++i)
    if (!(cfg.epsilon_schedule[i] > cfg.epsilon_schedule[i + 1]))
      throw std::invalid_argument("minimize: epsilon schedule must decrease");
  if (cfg.epsilon_schedule.back() < h)
    throw std::invalid_argument("minimize: epsilon must stay >= grid spacing");

  MinimizeResult res;
  PhaseField f =
      detail::initial_field(d, grid_n, lambda, cfg.epsilon_schedule.front(), cfg);
  long total_it = 0;
  for (double eps : cfg.epsilon_schedule) {
    f.epsilon = eps;
    total_it += detail::relax_stage(f, lambda, cfg);
  }
  // Sharpen, then let the interface re-equilibrate at the final width.
  f = threshold_refine(f, lambda, 10, cfg.stagnation_tolerance);
  f.values = f.values.cwiseMax(0.0).cwiseMin(1.0);
  detail::project_volume(f.values, lambda);
  OptimizerConfig polish = cfg;
  polish.max_iterations = std::min(cfg.max_iterations, 800);
  total_it += detail::relax_stage(f, lambda, polish);

  res.estimate =
      relaxed_energy(f) / detail::interface_calibration(f.epsilon * grid_n);
  res.field = f;
  res.diagnostics.iterations = total_it;
  res.diagnostics.final_volume = f.volume();
  res.diagnostics.final_epsilon = f.epsilon;
  res.diagnostics.grid_n = grid_n;
  res.diagnostics.converged =
      std::abs(f.volume() - lambda) <= cfg.volume_tolerance;
  return res;
}

/// Sweep of upper bounds over a lambda grid, warm-starting each point from
/// its neighbor. Failed points are skipped, not fatal.
inline ProfileCurve profile_sweep(int d, const std::vector<double>& grid,
                                  int grid_n, OptimizerConfig cfg = {}) {
  ProfileCurve curve;
  curve.dimension = d;
  curve.provenance = Provenance::numerical;
  Eigen::VectorXd warm;
  for (double lambda : grid) {
    if (!(lambda > 0.0 && lambda < 1.0)) continue;
    OptimizerConfig point_cfg = cfg;
    if (warm.size() > 0) {
      point_cfg.init = InitMode::voxel_warm_start;
      point_cfg.warm_start = warm;
    }
    // Fresh slab and corner-ball starts compete against the continued
    // branch at every point; a single warm-started descent never crosses
    // between the basins.
    OptimizerConfig slab_cfg = cfg;
    slab_cfg.init = InitMode::slab;
    OptimizerConfig ball_cfg = cfg;
    ball_cfg.init = InitMode::corner_ball;
    try {
      MinimizeResult r = minimize(d, lambda, grid_n, point_cfg);
      for (const auto& alt : {slab_cfg, ball_cfg}) {
        MinimizeResult ra = minimize(d, lambda, grid_n, alt);
        if (ra.estimate < r.estimate) r = std::move(ra);
      }
      curve.lambdas.push_back(lambda);
      curve.values.push_back(r.estimate);
      warm = r.field.values;
    } catch (const std::exception&) {
      // point skipped; sweep continues
    }
  }
  return curve;
}

/// Portable dump: 16-byte header (uint32 dimension, uint32 grid_n, IEEE-754
/// double epsilon, all little-endian) followed by the nodal values as
/// little-endian doubles.
inline void write_field(const std::string& path, const PhaseField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  const std::uint32_t dim = f.dimension, n = f.grid_n;
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&f.epsilon), 8);
  os.write(reinterpret_cast<const char*>(f.values.data()), 8 * f.nodes());
}

inline PhaseField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::uint32_t dim = 0, n = 0;
  PhaseField f;
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&f.epsilon), 8);
  f.dimension = static_cast<int>(dim);
  f.grid_n = static_cast<int>(n);
  f.values.resize(detail::node_count(f.dimension, f.grid_n));
  is.read(reinterpret_cast<char*>(f.values.data()), 8 * f.nodes());
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  return f;
}

}  // namespace isocube
