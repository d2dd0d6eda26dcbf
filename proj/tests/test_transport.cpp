#include <doctest.h>

#include <cmath>

#include "isocube/transport.hpp"
#include "quadrature_oracle.hpp"

using namespace isocube;

TEST_CASE("transport round trip") {
  CounterRng rng(21);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 16);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.next_uniform(-3.0, 3.0);
    const Eigen::VectorXd back = to_gauss(to_cube(x));
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Deeper in the tail the cube coordinate itself loses absolute precision
  // (1 - p near 1), so only a looser bound is meaningful.
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd x(2);
    x << rng.next_uniform(-6.0, 6.0), rng.next_uniform(-6.0, 6.0);
    const Eigen::VectorXd back = to_gauss(to_cube(x));
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-8);
  }
  Eigen::VectorXd bad(2);
  bad << 0.5, 1.0;
  CHECK_THROWS_AS(to_gauss(bad), std::domain_error);
  CHECK_THROWS_AS(to_cube(Eigen::VectorXd::Zero(17)), std::domain_error);
}

TEST_CASE("restriction jacobian closed cases") {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2), e2 = Eigen::VectorXd::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  CHECK(restriction_jacobian(Eigen::MatrixXd::Identity(2, 2), e1) ==
        doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 3.0;
  // A restricted to nu-perp scales (d-1)-area by |det A| |(A^T)^{-1} nu|.
  CHECK(restriction_jacobian(D, e1) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(restriction_jacobian(D, e2) == doctest::Approx(2.0).epsilon(1e-13));
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::MatrixXd R(2, 2);
  R << c, -s, s, c;
  CHECK(restriction_jacobian(R, e1) == doctest::Approx(1.0).epsilon(1e-13));
  Eigen::MatrixXd sing = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS(restriction_jacobian(sing, e1));
  CHECK_THROWS_AS(restriction_jacobian(D, 2.0 * e1), std::invalid_argument);
}

TEST_CASE("restriction jacobian agrees with the rejection-sampling oracle") {
  CounterRng rng(33);
  for (int d = 2; d <= 3; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      Eigen::MatrixXd A(d, d);
      do {
        for (int r = 0; r < d; ++r)
          for (int cc = 0; cc < d; ++cc) A(r, cc) = rng.next_uniform(-1.0, 1.0);
      } while (std::abs(A.determinant()) < 0.3);
      Eigen::VectorXd nu(d);
      for (int i = 0; i < d; ++i) nu[i] = rng.next_uniform(-1.0, 1.0);
      nu.normalize();
      const double formula = restriction_jacobian(A, nu);
      const double mc = restriction_jacobian_mc(A, nu, 400000, 55 + rep);
      CHECK(std::abs(formula - mc) / formula < 0.02);
    }
  }
}

TEST_CASE("boundary weight") {
  Eigen::VectorXd nu(2), x(2);
  nu << 1.0, 0.0;
  x << 1.3, -0.4;
  CHECK(boundary_weight(x, nu) ==
        doctest::Approx(kSqrt2Pi * std::exp(0.5 * 1.3 * 1.3)).epsilon(1e-13));
  CHECK(boundary_weight(Eigen::VectorXd::Zero(2), nu) ==
        doctest::Approx(kSqrt2Pi).epsilon(1e-14));
  // x supported off the normal: equality persists.
  Eigen::VectorXd x2(2);
  x2 << 0.0, 2.0;
  CHECK(boundary_weight(x2, nu) == doctest::Approx(kSqrt2Pi).epsilon(1e-14));
  CHECK_THROWS_AS(boundary_weight(x, 2.0 * nu), std::invalid_argument);
}

TEST_CASE("axis half-space penalized value is constant in the offset") {
  for (double t : {-1.5, -0.5, 0.0, 0.8, 2.0}) {
    Eigen::VectorXd n(3);
    n << 1.0, 0.0, 0.0;
    const SurfaceSample s = analytic_halfspace_surface({n, t}, 3, 8.0, 160);
    const PenalizedValue v = penalized_functional(s);
    CHECK(v.total == doctest::Approx(kInvSqrt2Pi).epsilon(1e-6));
    // Closed form: pdf(t) e^{t^2/2} == 1/sqrt(2 pi) exactly.
    CHECK(std_normal_pdf(t) * std::exp(0.5 * t * t) ==
          doctest::Approx(kInvSqrt2Pi).epsilon(1e-14));
  }
}

TEST_CASE("tilted half-space pays a positive penalty") {
  Eigen::VectorXd n(2);
  n << 1.0, 1.0;
  n.normalize();
  const SurfaceSample s = analytic_halfspace_surface({n, 0.0}, 2, 12.0, 60000);
  const PenalizedValue v = penalized_functional(s);
  CHECK(v.gauss_perimeter == doctest::Approx(kInvSqrt2Pi).epsilon(1e-8));
  // Frozen from the quadrature reference:
  // (1/2pi) integral of exp(-s^2/4) - exp(-s^2/2).
  CHECK(v.penalty == doctest::Approx(0.16524730314632358).epsilon(1e-7));
  const double ref = test_oracle::integrate(
                         [](double t) {
                           return std::exp(-0.25 * t * t) - std::exp(-0.5 * t * t);
                         },
                         -14.0, 14.0) /
                     (2.0 * M_PI);
  CHECK(v.penalty == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("decomposition identity for slabs") {
  for (int d = 1; d <= 3; ++d) {
    for (int i = 1; i <= 20; ++i) {
      const double lambda = i / 21.0;
      const BoundReport closed = decomposition_check(make_slab(d, lambda), lambda);
      CHECK(std::abs(closed.margin) < 1e-8);
      if (d <= 2) {
        const BoundReport quad =
            decomposition_check(make_slab(d, lambda), lambda, 4096, true);
        CHECK(std::abs(quad.margin) < 1e-3);
      }
    }
  }
}

TEST_CASE("decomposition identity for curved candidates") {
  CandidateSpec ball2{CandidateFamily::vertex_ball, 2, 0.15, 0, nullptr};
  CHECK(std::abs(decomposition_check(ball2, 0.15, 20000).margin) < 1e-4);
  CandidateSpec ball3{CandidateFamily::vertex_ball, 3, 0.1, 0, nullptr};
  CHECK(std::abs(decomposition_check(ball3, 0.1, 600).margin) < 1e-3);
  CandidateSpec cyl{CandidateFamily::edge_cylinder, 3, 0.2, 0, nullptr};
  CHECK(std::abs(decomposition_check(cyl, 0.2, 600).margin) < 1e-3);
}

TEST_CASE("cube perimeter closed forms match the candidate families") {
  CandidateSpec ball2{CandidateFamily::vertex_ball, 2, 0.1, 0, nullptr};
  CHECK(candidate_cube_perimeter(ball2) ==
        doctest::Approx(vertex_ball_perimeter(2, 0.1).value()).epsilon(1e-13));
  CandidateSpec ball3{CandidateFamily::vertex_ball, 3, 0.1, 0, nullptr};
  CHECK(candidate_cube_perimeter(ball3) ==
        doctest::Approx(vertex_ball_perimeter(3, 0.1).value()).epsilon(1e-13));
  CandidateSpec cyl{CandidateFamily::edge_cylinder, 3, 0.2, 0, nullptr};
  CHECK(candidate_cube_perimeter(cyl) ==
        doctest::Approx(edge_cylinder_perimeter(0.2).value()).epsilon(1e-13));
  CHECK(candidate_cube_perimeter(make_slab(4, 0.3)) == 1.0);
}

TEST_CASE("push-forward of the gaussian is uniform") {
  const long n = 100000;
  const Eigen::VectorXd stats = pushforward_ks_test(3, n, 2024);
  const double crit = 1.95 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < 3; ++i) CHECK(stats[i] < crit);
  CHECK_THROWS_AS(pushforward_ks_test(2, 10, 1), std::domain_error);
}

TEST_CASE("surface sample validation") {
  SurfaceSample s;
  s.points = Eigen::MatrixXd::Zero(2, 3);
  s.normals = Eigen::MatrixXd::Zero(2, 3);
  s.weights = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // non-unit normals
  for (int k = 0; k < 3; ++k) s.normals(0, k) = 1.0;
  CHECK_NOTHROW(s.validate());
  s.weights[1] = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
