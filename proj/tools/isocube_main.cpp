// Command-line front end: profile tables, verification suites, Figure-style
// curve bundles, the exhaustive voxel oracle and the phase-field optimizer.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "isocube/phase_field.hpp"
#include "isocube/reports_io.hpp"
#include "isocube/suites.hpp"
#include "isocube/transport.hpp"
#include "isocube/voxel.hpp"

namespace {

using namespace isocube;

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::string config_path;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << text;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_profile(int dim, int grid_points, const std::string& sources_csv,
                int optimizer_grid, const CommonOpts& common) {
  const auto sources = split_csv(sources_csv);
  if (sources.empty()) throw CLI::ValidationError("profile", "empty source set");
  const std::set<std::string> known = {"exact", "candidate", "lower_bound",
                                       "numerical"};
  for (const auto& s : sources)
    if (!known.count(s))
      throw CLI::ValidationError("profile", "unknown source: " + s);

  ProfileTable t;
  t.lambdas = uniform_grid(grid_points);
  t.meta["command"] = "profile";
  t.meta["dim"] = std::to_string(dim);
  t.meta["grid"] = std::to_string(grid_points);
  t.meta["sources"] = sources_csv;
  t.meta["seed"] = std::to_string(common.seed);
  for (const auto& s : sources) {
    if (s == "numerical") {
      if (dim > 4)
        throw CLI::ValidationError("profile", "numerical source needs d <= 4");
      OptimizerConfig cfg;
      cfg.seed = common.seed;
      ProfileCurve sweep = profile_sweep(dim, t.lambdas, optimizer_grid, cfg);
      std::map<double, double> by_lambda;
      for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
        by_lambda[sweep.lambdas[i]] = sweep.values[i];
      std::vector<double> col;
      for (double l : t.lambdas) {
        auto it = by_lambda.find(l);
        col.push_back(it == by_lambda.end()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : it->second);
      }
      t.columns.push_back("numerical_d" + std::to_string(dim));
      t.provenances.push_back("numerical");
      t.data.push_back(std::move(col));
      t.meta["optimizer_grid_n"] = std::to_string(optimizer_grid);
    } else {
      add_closed_form_column(t, s, dim);
    }
  }
  emit(common.format == "json" ? render_json(t) : render_csv(t), common.out);
  return 0;
}

int run_verify(const std::string& suite, const CommonOpts& common) {
  std::vector<SuiteResult> results;
  try {
    results = suites::run_suites(suite);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  nlohmann::json summary = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : results) {
    summary.push_back(r.to_json());
    ok = ok && r.passed();
  }
  emit(nlohmann::json{{"version", kArtifactVersion},
                      {"suite", suite},
                      {"passed", ok},
                      {"results", summary}}
               .dump(2) +
           "\n",
       common.out);
  return ok ? 0 : 1;
}

int run_figure1(const CommonOpts& common) {
  ProfileTable t;
  t.lambdas = uniform_grid(1001);
  t.meta["command"] = "figure1";
  add_closed_form_column(t, "exact", 1);
  {
    ProfileTable tmp;
    tmp.lambdas = t.lambdas;
    add_closed_form_column(tmp, "exact", 2);
    t.columns.push_back(tmp.columns[0]);
    t.provenances.push_back(tmp.provenances[0]);
    t.data.push_back(std::move(tmp.data[0]));
  }
  add_closed_form_column(t, "candidate", 3);
  add_closed_form_column(t, "lower_bound", 3);
  t.columns.back() = "gaussian_bound";

  // Caption features, recorded in the header.
  const auto& d1 = t.data[0];
  const auto& d2 = t.data[1];
  const auto& d3 = t.data[2];
  const auto& gb = t.data[3];
  bool concave_ok = true;
  for (std::size_t i = 1; i + 1 < t.lambdas.size(); ++i) {
    if (d2[i + 1] + d2[i - 1] - 2.0 * d2[i] > 1e-9) concave_ok = false;
    if (d1[i + 1] + d1[i - 1] - 2.0 * d1[i] > 1e-9) concave_ok = false;
  }
  double closeness = 0.0;
  bool monotone_ok = true, flat_ok = true;
  for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
    closeness = std::max(closeness, d3[i] - gb[i]);
    if (d3[i] > d2[i] + 1e-12 || d2[i] > d1[i] + 1e-12) monotone_ok = false;
    const double l = t.lambdas[i];
    if (l >= 1.0 / M_PI && l <= 1.0 - 1.0 / M_PI &&
        (std::abs(d2[i] - 1.0) > 1e-12 || std::abs(d3[i] - 1.0) > 1e-12))
      flat_ok = false;
  }
  t.meta["feature_concavity_exact_curves"] = concave_ok ? "pass" : "fail";
  t.meta["feature_gaussian_bound_max_gap"] = format_sig12(closeness);
  t.meta["feature_flat_near_half"] = flat_ok ? "pass" : "fail";
  t.meta["feature_dimension_monotonicity"] = monotone_ok ? "pass" : "fail";

  emit(common.format == "json" ? render_json(t) : render_csv(t), common.out);
  return (concave_ok && monotone_ok && flat_ok) ? 0 : 1;
}

int run_oracle(int dim, int grid_n, int cells, bool all_k, bool symmetry,
               const std::string& export_optima, const CommonOpts& common) {
  std::ostringstream os;
  os << "# " << kArtifactVersion << "\n# command=oracle dim=" << dim
     << " grid_n=" << grid_n << " symmetry=" << (symmetry ? 1 : 0) << "\n";
  os << "k,min_perimeter,optima_count,subsets_scanned\n";
  const int k_lo = all_k ? 1 : cells;
  const int k_hi = cells;
  std::ostringstream optima_text;
  for (int k = k_lo; k <= k_hi; ++k) {
    const ExhaustiveResult r = exhaustive_min(dim, grid_n, k, symmetry);
    os << k << "," << format_sig12(r.min_perimeter) << "," << r.optima.size()
       << "," << r.subsets_scanned << "\n";
    if (!export_optima.empty()) {
      for (std::size_t i = 0; i < r.optima.size(); ++i) {
        VoxelSet v(dim, grid_n);
        for (long c = 0; c < v.cells(); ++c)
          if (r.optima[i][c]) v.flip(c);
        optima_text << "# k=" << k << " optimum " << i << "\n"
                    << v.to_text() << "\n";
      }
    }
  }
  if (!export_optima.empty()) {
    std::ofstream of(export_optima);
    if (!of) throw std::runtime_error("cannot open " + export_optima);
    of << optima_text.str();
  }
  emit(os.str(), common.out);
  return 0;
}

int run_optimize(int dim, double lambda, int grid_n,
                 const std::string& field_out, const CommonOpts& common) {
  OptimizerConfig cfg;
  cfg.seed = common.seed;
  const MinimizeResult r = minimize(dim, lambda, grid_n, cfg);
  if (!field_out.empty()) write_field(field_out, r.field);
  nlohmann::json j{{"version", kArtifactVersion},
                   {"dim", dim},
                   {"lambda", lambda},
                   {"grid_n", grid_n},
                   {"seed", common.seed},
                   {"estimate", r.estimate},
                   {"lower_bound", lower_bound_profile(lambda)},
                   {"candidate_envelope", candidate_envelope_value(dim, lambda)},
                   {"converged", r.diagnostics.converged},
                   {"iterations", r.diagnostics.iterations},
                   {"final_volume", r.diagnostics.final_volume},
                   {"final_epsilon", r.diagnostics.final_epsilon}};
  emit(j.dump(2) + "\n", common.out);
  return r.diagnostics.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative isoperimetric profile toolkit for the hypercube"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--out", common.out, "output path (default stdout)");
  app.add_option("--format", common.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", common.seed, "RNG seed");
  app.add_option("--config", common.config_path, "key=value config file");

  auto* profile = app.add_subcommand("profile", "profile curves as a table");
  int dim = 3, grid_points = 101, optimizer_grid = 64;
  std::string sources = "candidate,lower_bound";
  profile->add_option("--dim", dim, "cube dimension");
  profile->add_option("--grid", grid_points, "lambda grid points");
  profile->add_option("--sources", sources,
                      "comma list of exact,candidate,lower_bound,numerical");
  profile->add_option("--optimizer-grid-n", optimizer_grid,
                      "grid for the numerical source");

  auto* verify = app.add_subcommand("verify", "run a property suite");
  std::string suite = "all";
  verify->add_option("--suite", suite, "transport|lemmas|oracle|optimizer|all");

  auto* figure1 = app.add_subcommand("figure1", "curve bundle for d=1,2,3");

  auto* oracle = app.add_subcommand("oracle", "exhaustive voxel minimization");
  int o_dim = 2, o_grid = 4, o_cells = 8;
  bool all_k = false, symmetry = false;
  std::string export_optima;
  oracle->add_option("--dim", o_dim, "grid dimension");
  oracle->add_option("--grid-n", o_grid, "cells per side");
  oracle->add_option("--cells", o_cells, "target filled cell count");
  oracle->add_flag("--all-k", all_k, "sweep k=1..cells");
  oracle->add_flag("--symmetry", symmetry, "orbit-reduce the optima list");
  oracle->add_option("--export-optima", export_optima,
                     "write optimal sets as bit-matrix text");

  auto* optimize = app.add_subcommand("optimize", "phase-field upper bound");
  int p_dim = 2, p_grid = 128;
  double p_lambda = 0.5;
  std::string field_out;
  optimize->add_option("--dim", p_dim, "dimension (<= 4)");
  optimize->add_option("--lambda", p_lambda, "target volume");
  optimize->add_option("--grid-n", p_grid, "nodes per side");
  optimize->add_option("--field-out", field_out, "binary field dump path");

  // Accept the common flags on either side of the subcommand name.
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!common.config_path.empty()) {
      // Config values act as defaults for the active subcommand.
      CLI::App* active = app.get_subcommands().front();
      auto kv = parse_config_file(common.config_path);
      std::vector<std::string> args;
      for (const auto& [key, value] : kv) {
        CLI::Option* opt = active->get_option_no_throw("--" + key);
        CLI::Option* copt = app.get_option_no_throw("--" + key);
        if (opt == nullptr && copt == nullptr)
          throw CLI::ValidationError("config", "unknown config key: " + key);
        CLI::Option* target = opt ? opt : copt;
        if (target->count() == 0) {
          if (target->get_expected_min() == 0)
            target->add_result("true");
          else
            target->add_result(value);
          target->run_callback();
        }
      }
    }

    if (profile->parsed())
      return run_profile(dim, grid_points, sources, optimizer_grid, common);
    if (verify->parsed()) return run_verify(suite, common);
    if (figure1->parsed()) return run_figure1(common);
    if (oracle->parsed())
      return run_oracle(o_dim, o_grid, o_cells, all_k, symmetry, export_optima,
                        common);
    if (optimize->parsed())
      return run_optimize(p_dim, p_lambda, p_grid, field_out, common);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
