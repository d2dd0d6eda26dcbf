#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isocube/bounds.hpp"
#include "isocube/candidates.hpp"
#include "isocube/gaussian.hpp"
#include "isocube/phase_field.hpp"
#include "isocube/transport.hpp"
#include "isocube/voxel.hpp"

namespace isocube {

/// Aggregate outcome of one property suite.
struct SuiteResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> failure_configs;

  void record(bool ok, double margin, const std::string& config) {
    ++checks;
    worst_margin = std::min(worst_margin, margin);
    if (!ok) {
      ++failures;
      if (failure_configs.size() < 32) failure_configs.push_back(config);
    }
  }

  bool passed() const { return failures == 0; }

  nlohmann::json to_json() const {
    return {{"suite", name},
            {"checks", checks},
            {"failures", failures},
            {"worst_margin", worst_margin},
            {"failure_configs", failure_configs}};
  }
};

namespace suites {

/// Fixed expected table for the d=2, n=4 exhaustive oracle: minimum face
/// count and number of optimal subsets for k = 1..8. Face area is 1/4.
struct OracleGoldenRow {
  int k;
  long faces;
  long optima;
};
inline const std::vector<OracleGoldenRow>& oracle_golden_d2_n4() {
  static const std::vector<OracleGoldenRow> rows = {
      {1, 2, 4}, {2, 3, 8}, {3, 4, 12}, {4, 4, 8},
      {5, 5, 16}, {6, 5, 16}, {7, 5, 8}, {8, 4, 4}};
  return rows;
}

inline Eigen::VectorXd random_unit(CounterRng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = std_normal_quantile(rng.next_open01());
  return v.normalized();
}

inline SuiteResult transport_suite(std::uint64_t seed = 1) {
  SuiteResult res;
  res.name = "transport";
  CounterRng rng(seed);

  // |det D to_cube| == gaussian density, via finite differences.
  for (int d = 1; d <= 3; ++d) {
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::VectorXd x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.next_uniform(-3.0, 3.0);
      Eigen::MatrixXd J(d, d);
      const double h = 1e-6;
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (to_cube(xp) - to_cube(xm)) / (2.0 * h);
      }
      const double dens = gaussian_density_d(x);
      const double rel = std::abs(J.determinant() - dens) / dens;
      res.record(rel < 1e-5, 1e-5 - rel, "jacobian identity d=" + std::to_string(d));
    }
  }

  // boundary_weight >= sqrt(2*pi), with equality when nu_i x_i == 0.
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 7);
    Eigen::VectorXd x(d), nu(d);
    for (int i = 0; i < d; ++i) x[i] = rng.next_uniform(-2.5, 2.5);
    nu = random_unit(rng, d);
    const double w = boundary_weight(x, nu);
    res.record(w >= kSqrt2Pi - 1e-12, w - kSqrt2Pi, "boundary_weight lower bound");
    // Equality case: zero out x where nu is supported.
    Eigen::VectorXd xz = Eigen::VectorXd::Zero(d);
    const double we = boundary_weight(xz, nu);
    res.record(std::abs(we - kSqrt2Pi) < 1e-12, 1e-12 - std::abs(we - kSqrt2Pi),
               "boundary_weight equality case");
  }

  // Axis half-space total is constant in the offset (closed form).
  for (int i = -2; i <= 2; ++i) {
    const double t = static_cast<double>(i);
    const double total = std_normal_pdf(t) * std::exp(0.5 * t * t);
    res.record(std::abs(total - kInvSqrt2Pi) < 1e-8,
               1e-8 - std::abs(total - kInvSqrt2Pi), "penalized constancy");
  }

  // Decomposition identity for slabs (closed form + quadrature) and the
  // curved families in low dimension.
  for (int d = 1; d <= 3; ++d) {
    for (int i = 1; i <= 19; ++i) {
      const double lambda = i / 20.0;
      const BoundReport rep = decomposition_check(make_slab(d, lambda), lambda);
      res.record(std::abs(rep.margin) < 1e-8, 1e-8 - std::abs(rep.margin),
                 "slab decomposition d=" + std::to_string(d));
    }
  }
  {
    CandidateSpec ball{CandidateFamily::vertex_ball, 2, 0.1, 0, nullptr};
    const BoundReport rep = decomposition_check(ball, 0.1, 10000);
    res.record(std::abs(rep.margin) < 1e-3, 1e-3 - std::abs(rep.margin),
               "vertex ball decomposition d=2");
  }

  // Lemma 3.1 formula vs the Monte Carlo area oracle.
  for (int d = 2; d <= 3; ++d) {
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
      Eigen::MatrixXd A(d, d);
      do {
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) A(r, c) = rng.next_uniform(-1.0, 1.0);
      } while (std::abs(A.determinant()) < 0.2);
      const Eigen::VectorXd nu = random_unit(rng, d);
      const double formula = restriction_jacobian(A, nu);
      const double mc = restriction_jacobian_mc(A, nu, 500000, rng.next_u64());
      const double rel = std::abs(formula - mc) / formula;
      res.record(rel < 0.015, 0.015 - rel, "restriction jacobian vs MC");
    }
  }

  // Push-forward of the Gaussian measure is uniform on the cube.
  {
    const Eigen::VectorXd stats = pushforward_ks_test(3, 100000, 11);
    const double crit = 1.95 / std::sqrt(100000.0);
    for (int i = 0; i < 3; ++i)
      res.record(stats[i] < crit, crit - stats[i], "pushforward KS coord");
  }
  return res;
}

inline GraphPerturbation random_graph(CounterRng& rng, double r) {
  GraphPerturbation g;
  g.bound = 3.0 * r;
  const int waves = 1 + static_cast<int>(rng.next_u64() % 3);
  for (int w = 0; w < waves; ++w)
    g.waves.push_back({rng.next_uniform(0.05 * r, 3.0 * r / waves),
                       rng.next_uniform(0.1, 3.0),
                       rng.next_uniform(0.0, 2.0 * M_PI)});
  return g;
}

inline SlicingConfig random_slicing_config(CounterRng& rng, std::uint64_t seed) {
  SlicingConfig cfg;
  cfg.seed = seed;
  cfg.ell = rng.next_uniform(0.1, 2.0);
  cfg.r = rng.next_uniform(0.05, 1.0);
  cfg.graph = random_graph(rng, cfg.r);
  const int carves = static_cast<int>(rng.next_u64() % 3);
  double cursor = rng.next_uniform(-4.0, -1.0);
  for (int c = 0; c < carves; ++c) {
    const double a = cursor + rng.next_uniform(0.05, 1.0);
    const double b = a + rng.next_uniform(0.05, 1.0);
    cfg.carves.emplace_back(a, b);
    cursor = b;
  }
  return cfg;
}

/// Nondecreasing piecewise-exponential test function: plateaus after cut.
inline std::function<double(double)> random_monotone_f(CounterRng& rng) {
  struct Term {
    double a, b, cut;
  };
  std::vector<Term> terms;
  const int n = 1 + static_cast<int>(rng.next_u64() % 3);
  for (int i = 0; i < n; ++i)
    terms.push_back({rng.next_uniform(0.0, 2.0), rng.next_uniform(0.1, 1.5),
                     rng.next_uniform(0.2, 4.0)});
  return [terms](double s) {
    double v = 0.0;
    for (const auto& t : terms)
      v += t.a * (std::exp(t.b * std::min(s, t.cut)) - 1.0);
    return v;
  };
}

inline SuiteResult lemmas_suite(std::uint64_t seed = 2, int fuzz_count = 1000) {
  SuiteResult res;
  res.name = "lemmas";
  CounterRng rng(seed);

  // Slicing bound fuzz.
  for (int i = 0; i < fuzz_count; ++i) {
    CounterRng sub = rng.split(i);
    const SlicingConfig cfg = random_slicing_config(sub, seed + i);
    const BoundReport rep = slicing_bound(cfg);
    res.record(rep.margin >= -1e-9, rep.margin, rep.config);
  }

  // Strip bound fuzz.
  for (int i = 0; i < fuzz_count; ++i) {
    CounterRng sub = rng.split(1000000 + i);
    const double l = sub.next_uniform(0.1, 2.0);
    const double q = sub.next_uniform(-1.0, 1.0);
    const double deficit = sub.next_uniform(0.0, 1.5) * std_normal_pdf(l);
    const BoundReport rep = strip_bound_check(l, q, deficit, random_monotone_f(sub));
    res.record(rep.margin >= -1e-9, rep.margin, rep.config);
  }

  // Jensen step.
  for (int i = 0; i < 100000; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 10);
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = rng.next_uniform(-2.5, 2.5);
    const double gap = jensen_gap(random_unit(rng, d), x);
    res.record(gap >= -1e-12, gap, "jensen_gap d=" + std::to_string(d));
  }

  // Cauchy-Schwarz step.
  for (int i = 0; i < 10000; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Eigen::VectorXd u(d), v(d);
    for (int j = 0; j < d; ++j) {
      u[j] = rng.next_uniform(-3.0, 3.0);
      v[j] = rng.next_uniform(-3.0, 3.0);
    }
    const BoundReport rep = cs_pointwise(u, v);
    res.record(rep.margin >= -1e-12, rep.margin, rep.config);
  }

  // delta_1 symmetry and strip constant positivity.
  for (int i = 1; i < 100; ++i) {
    const double lambda = i / 100.0;
    const double diff =
        std::abs(delta_threshold(lambda) - delta_threshold(1.0 - lambda));
    res.record(diff <= 1e-12, 1e-12 - diff, "delta_threshold symmetry");
  }
  for (double l = 0.05; l <= 4.0 + 1e-12; l *= std::pow(80.0, 1.0 / 24.0)) {
    const double c = strip_constant(l);
    res.record(c > 0.0, c, "strip_constant positivity l=" + std::to_string(l));
  }
  return res;
}

inline SuiteResult oracle_suite() {
  SuiteResult res;
  res.name = "oracle";
  for (const auto& row : oracle_golden_d2_n4()) {
    const ExhaustiveResult r = exhaustive_min(2, 4, row.k);
    const bool ok = r.min_faces == row.faces &&
                    static_cast<long>(r.optima.size()) == row.optima;
    res.record(ok, ok ? 0.0 : -1.0, "golden d=2 n=4 k=" + std::to_string(row.k));
  }
  // Scaled minima never undercut the Gaussian lower bound minus the
  // documented discretization slack 2d/n.
  for (int k = 1; k <= 8; ++k) {
    const ExhaustiveResult r = exhaustive_min(2, 4, k);
    const double lambda = k / 16.0;
    const double slack = 2.0 * 2.0 / 4.0;
    const double margin =
        r.min_perimeter - (lower_bound_profile(lambda) - slack);
    res.record(margin >= 0.0, margin, "oracle vs gaussian bound k=" + std::to_string(k));
  }
  return res;
}

inline SuiteResult optimizer_suite(std::uint64_t seed = 3) {
  SuiteResult res;
  res.name = "optimizer";
  OptimizerConfig cfg;
  cfg.seed = seed;
  {
    MinimizeResult r = minimize(1, 0.3, 512, cfg);
    res.record(std::abs(r.estimate - 1.0) < 0.02, 0.02 - std::abs(r.estimate - 1.0),
               "d=1 interval profile");
  }
  for (double lambda : {0.3, 0.5}) {
    OptimizerConfig ball = cfg;
    ball.init = InitMode::corner_ball;
    const double estimate = std::min(minimize(2, lambda, 128, cfg).estimate,
                                     minimize(2, lambda, 128, ball).estimate);
    const double truth = exact_profile_2d(lambda);
    const double rel = std::abs(estimate - truth) / truth;
    res.record(rel < 0.03, 0.03 - rel, "d=2 square profile lambda=" + std::to_string(lambda));
    const double sandwich = estimate - (lower_bound_profile(lambda) - 1e-6);
    res.record(sandwich >= 0.0, sandwich, "sandwich lower");
    const double upper = candidate_envelope_value(2, lambda) * 1.05 - estimate;
    res.record(upper >= 0.0, upper, "sandwich upper");
  }
  return res;
}

inline std::vector<SuiteResult> run_suites(const std::string& which) {
  std::vector<SuiteResult> out;
  const bool all = which == "all";
  if (all || which == "transport") out.push_back(transport_suite());
  if (all || which == "lemmas") out.push_back(lemmas_suite());
  if (all || which == "oracle") out.push_back(oracle_suite());
  if (all || which == "optimizer") out.push_back(optimizer_suite());
  if (out.empty()) throw std::invalid_argument("unknown suite: " + which);
  return out;
}

}  // namespace suites
}  // namespace isocube
