#include <doctest.h>

#include <cmath>

#include "isocube/candidates.hpp"

using namespace isocube;

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit_ball_volume(0), std::domain_error);
}

TEST_CASE("slab perimeter is flat") {
  for (int d = 1; d <= 8; ++d) {
    CHECK(slab_perimeter(d, 0.0) == 0.0);
    CHECK(slab_perimeter(d, 1.0) == 0.0);
    for (double l = 0.05; l < 1.0; l += 0.1) CHECK(slab_perimeter(d, l) == 1.0);
  }
}

TEST_CASE("vertex ball closed forms") {
  // d=2: quarter disk, radius sqrt(4*lambda/pi), boundary length sqrt(pi*lambda).
  CHECK(vertex_ball_radius(2, 0.1) ==
        doctest::Approx(std::sqrt(0.4 / M_PI)).epsilon(1e-14));
  CHECK(vertex_ball_perimeter(2, 0.1).value() ==
        doctest::Approx(std::sqrt(M_PI * 0.1)).epsilon(1e-14));
  // d=3: eighth ball, lateral area (pi/2) r^2.
  const double r3 = vertex_ball_radius(3, 0.1);
  CHECK(vertex_ball_perimeter(3, 0.1).value() ==
        doctest::Approx(0.5 * M_PI * r3 * r3).epsilon(1e-12));
  // Past the fit bound (radius > 1) the family reports no value.
  CHECK(!vertex_ball_perimeter(2, M_PI / 4.0 + 0.01).has_value());
  CHECK(vertex_ball_perimeter(2, M_PI / 4.0 - 0.01).has_value());
}

TEST_CASE("edge cylinder equals the lifted planar vertex ball") {
  for (double l = 0.02; l < M_PI / 4.0; l += 0.03) {
    CHECK(edge_cylinder_perimeter(l).value() ==
          doctest::Approx(vertex_ball_perimeter(2, l).value()).epsilon(1e-14));
  }
  CHECK(!edge_cylinder_perimeter(0.99).has_value());
}

TEST_CASE("exact planar profile") {
  CHECK(exact_profile_2d(0.0) == 0.0);
  CHECK(exact_profile_2d(1.0) == 0.0);
  CHECK(exact_profile_2d(0.5) == 1.0);
  CHECK(exact_profile_2d(0.1) == doctest::Approx(std::sqrt(0.1 * M_PI)).epsilon(1e-14));
  // Flat exactly on [1/pi, 1 - 1/pi].
  CHECK(exact_profile_2d(1.0 / M_PI) == 1.0);
  CHECK(exact_profile_2d(1.0 - 1.0 / M_PI) == 1.0);
  CHECK(exact_profile_2d(1.0 / M_PI - 1e-6) < 1.0);
  for (double l = 0.01; l < 1.0; l += 0.01)
    CHECK(exact_profile_2d(l) == doctest::Approx(exact_profile_2d(1.0 - l)).epsilon(1e-14));
}

TEST_CASE("envelope reproduces the known low-dimensional profiles") {
  for (double l = 0.0; l <= 1.0 + 1e-12; l += 0.001) {
    const double ll = std::min(l, 1.0);
    CHECK(candidate_envelope_value(2, ll) ==
          doctest::Approx(exact_profile_2d(ll)).epsilon(1e-13));
    CHECK(candidate_envelope_value(3, ll) ==
          doctest::Approx(conjectural_profile_3d(ll)).epsilon(1e-13));
    CHECK(candidate_envelope_value(1, ll) == slab_perimeter(1, ll));
  }
}

TEST_CASE("envelope dominance, symmetry, flat region") {
  for (int d = 1; d <= 7; ++d) {
    for (double l = 0.0; l <= 1.0 + 1e-12; l += 0.001) {
      const double ll = std::min(l, 1.0);
      CHECK(candidate_envelope_value(d + 1, ll) <=
            candidate_envelope_value(d, ll) + 1e-12);
    }
  }
  for (double l = 0.001; l < 0.5; l += 0.001)
    CHECK(candidate_envelope_value(5, l) ==
          doctest::Approx(candidate_envelope_value(5, 1.0 - l)).epsilon(1e-13));
  for (int k = 0; 0.31831 + k * 0.003 <= 0.68169; ++k)
    CHECK(candidate_envelope_value(6, 0.31831 + k * 0.003) == 1.0);
}

TEST_CASE("envelope concavity and the gaussian lower bound") {
  const double h = 0.001;
  for (int d = 1; d <= 8; ++d) {
    for (int i = 1; i <= 998; ++i) {
      const double l = i * h;
      const double second = candidate_envelope_value(d, (i + 1) * h) +
                            candidate_envelope_value(d, (i - 1) * h) -
                            2.0 * candidate_envelope_value(d, l);
      CHECK(second <= 1e-9);
      CHECK(candidate_envelope_value(d, l) >= lower_bound_profile(l) - 1e-6);
    }
  }
}

TEST_CASE("product lift bookkeeping") {
  ProfileCurve c;
  c.dimension = 3;
  c.lambdas = {0.25, 0.5};
  c.values = {0.8, 1.0};
  const ProfileCurve up = lift_product(c);
  CHECK(up.dimension == 4);
  CHECK(up.values == c.values);
  ProfileCurve inf;
  inf.dimension = ProfileCurve::kInfiniteDim;
  CHECK_THROWS_AS(lift_product(inf), std::domain_error);
}

TEST_CASE("envelope curve carries provenance") {
  const auto grid = uniform_grid(11);
  CHECK(candidate_envelope(2, grid).provenance == Provenance::exact);
  CHECK(candidate_envelope(3, grid).provenance == Provenance::candidate);
  CHECK_THROWS_AS(candidate_envelope_value(0, 0.5), std::domain_error);
  CHECK_THROWS_AS(candidate_envelope_value(17, 0.5), std::domain_error);
  CHECK_THROWS_AS(candidate_envelope_value(3, 1.5), std::domain_error);
}
