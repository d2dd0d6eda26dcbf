#pragma once

#include <string>
#include <vector>

namespace isocube {

enum class Provenance { exact, candidate, lower_bound, numerical };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::candidate: return "candidate";
    case Provenance::lower_bound: return "lower_bound";
    case Provenance::numerical: return "numerical";
  }
  return "?";
}

/// A sampled volume -> perimeter curve. dimension == kInfiniteDim marks a
/// curve for the infinite-dimensional limit.
struct ProfileCurve {
  static constexpr int kInfiniteDim = -1;

  std::vector<double> lambdas;
  std::vector<double> values;
  int dimension = 1;
  Provenance provenance = Provenance::candidate;
};

/// Uniform grid on [0,1] with the given number of points.
inline std::vector<double> uniform_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

}  // namespace isocube
