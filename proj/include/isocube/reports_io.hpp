#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "isocube/candidates.hpp"
#include "isocube/phase_field.hpp"
#include "isocube/profile_curve.hpp"

namespace isocube {

inline constexpr const char* kArtifactVersion = "isocube 0.1.0";

/// Columnar profile table: lambda plus one named column per source curve.
struct ProfileTable {
  std::vector<double> lambdas;
  std::vector<std::string> columns;       // e.g. candidate_d3
  std::vector<std::string> provenances;   // per column
  std::vector<std::vector<double>> data;  // per column, aligned with lambdas
  std::map<std::string, std::string> meta;
};

inline std::string format_sig12(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline std::string render_csv(const ProfileTable& t) {
  std::ostringstream os;
  os << "# " << kArtifactVersion << "\n";
  for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    os << "# provenance " << t.columns[c] << "=" << t.provenances[c] << "\n";
  os << "lambda";
  for (const auto& c : t.columns) os << "," << c;
  os << "\n";
  for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
    os << format_sig12(t.lambdas[i]);
    for (const auto& col : t.data) os << "," << format_sig12(col[i]);
    os << "\n";
  }
  return os.str();
}

inline std::string render_json(const ProfileTable& t) {
  nlohmann::json meta;
  meta["version"] = kArtifactVersion;
  for (const auto& [k, v] : t.meta) meta[k] = v;
  nlohmann::json provenance;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    provenance[t.columns[c]] = t.provenances[c];
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
    nlohmann::json row;
    row["lambda"] = t.lambdas[i];
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      row[t.columns[c]] = t.data[c][i];
    rows.push_back(row);
  }
  return nlohmann::json{{"meta", meta},
                        {"provenance", provenance},
                        {"rows", rows}}
      .dump(2);
}

/// Flat key=value config file, '#' comments; returns the parsed map.
inline std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + line);
    out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return out;
}

/// Exact, candidate and lower-bound columns at dimension d; the numerical
/// column is supplied by the caller (optimizer runs are expensive).
inline void add_closed_form_column(ProfileTable& t, const std::string& source,
                                   int d) {
  std::vector<double> col;
  col.reserve(t.lambdas.size());
  std::string provenance;
  if (source == "exact") {
    if (d > 2)
      throw std::invalid_argument("exact profile is only known for d <= 2");
    for (double l : t.lambdas)
      col.push_back(d == 1 ? (l == 0.0 || l == 1.0 ? 0.0 : 1.0)
                           : exact_profile_2d(l));
    provenance = "exact";
  } else if (source == "candidate") {
    for (double l : t.lambdas) col.push_back(candidate_envelope_value(d, l));
    provenance = d <= 2 ? "exact" : "candidate";
  } else if (source == "lower_bound") {
    for (double l : t.lambdas) col.push_back(lower_bound_profile(l));
    provenance = "lower_bound";
  } else {
    throw std::invalid_argument("unknown profile source: " + source);
  }
  t.columns.push_back(source + "_d" + std::to_string(d));
  t.provenances.push_back(provenance);
  t.data.push_back(std::move(col));
}

}  // namespace isocube
