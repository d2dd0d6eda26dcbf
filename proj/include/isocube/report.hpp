#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace isocube {

/// Outcome of one inequality check: lhs >= rhs is the claim, margin the
/// observed slack.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string config;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    return {{"lhs", lhs},
            {"rhs", rhs},
            {"margin", margin},
            {"config", config},
            {"seed", seed}};
  }
};

inline BoundReport make_report(double lhs, double rhs, std::string config,
                               std::uint64_t seed = 0) {
  return BoundReport{lhs, rhs, lhs - rhs, std::move(config), seed};
}

}  // namespace isocube
