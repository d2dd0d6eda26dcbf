#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = ISOCUBE_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
#ifdef _WIN32
  return status;
#else
  return WEXITSTATUS(status);
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("no_such_command") == 2);
  CHECK(run("--format yaml profile") == 2);
  CHECK(run("verify --suite bogus") == 2);
  CHECK(run("profile --sources bogus") == 2);
  CHECK(run("profile --sources \"\"") == 2);
  CHECK(run("profile --dim 5 --sources numerical") == 2);
}

TEST_CASE("profile output is deterministic and schema-correct") {
  CHECK(run("--out cli_a.csv profile --dim 3 --grid 21") == 0);
  CHECK(run("--out cli_b.csv profile --dim 3 --grid 21") == 0);
  const std::string a = slurp("cli_a.csv");
  CHECK(a == slurp("cli_b.csv"));
  CHECK(a.find("# isocube 0.1.0") == 0);
  CHECK(a.find("lambda,candidate_d3,lower_bound_d3") != std::string::npos);
  CHECK(a.find("0.5,1,1") != std::string::npos);
  CHECK(run("--out cli_a.json --format json profile --dim 3 --grid 21") == 0);
  CHECK(slurp("cli_a.json").find("\"provenance\"") != std::string::npos);
  std::remove("cli_a.csv");
  std::remove("cli_b.csv");
  std::remove("cli_a.json");
}

TEST_CASE("config file provides defaults and flags override") {
  {
    std::ofstream os("cli_test.cfg");
    os << "dim = 2\ngrid = 11\n";
  }
  CHECK(run("--config cli_test.cfg --out cli_cfg.csv profile") == 0);
  const std::string base = slurp("cli_cfg.csv");
  CHECK(base.find("candidate_d2") != std::string::npos);
  CHECK(run("--config cli_test.cfg --out cli_cfg2.csv profile --dim 3") == 0);
  CHECK(slurp("cli_cfg2.csv").find("candidate_d3") != std::string::npos);
  {
    std::ofstream os("cli_test.cfg");
    os << "dim = 2\nnonsense_key = 1\n";
  }
  CHECK(run("--config cli_test.cfg profile") == 2);
  std::remove("cli_test.cfg");
  std::remove("cli_cfg.csv");
  std::remove("cli_cfg2.csv");
}

TEST_CASE("figure1 bundle records the caption features") {
  CHECK(run("--out cli_fig.csv figure1") == 0);
  const std::string fig = slurp("cli_fig.csv");
  CHECK(fig.find("lambda,exact_d1,exact_d2,candidate_d3,gaussian_bound") !=
        std::string::npos);
  CHECK(fig.find("# feature_concavity_exact_curves=pass") != std::string::npos);
  CHECK(fig.find("# feature_flat_near_half=pass") != std::string::npos);
  CHECK(fig.find("# feature_dimension_monotonicity=pass") != std::string::npos);
  CHECK(fig.find("0.5,1,1,1,1") != std::string::npos);
  std::remove("cli_fig.csv");
}

TEST_CASE("oracle table and optima export") {
  CHECK(run("--out cli_oracle.csv oracle --dim 2 --grid-n 4 --cells 8 --all-k "
            "--export-optima cli_optima.txt") == 0);
  const std::string t = slurp("cli_oracle.csv");
  CHECK(t.find("k,min_perimeter,optima_count,subsets_scanned") != std::string::npos);
  CHECK(t.find("1,0.5,4,16") != std::string::npos);
  CHECK(t.find("8,1,4,12870") != std::string::npos);
  const std::string optima = slurp("cli_optima.txt");
  CHECK(optima.find("# k=1 optimum 0") != std::string::npos);
  CHECK(optima.find("1000\n0000\n0000\n0000") != std::string::npos);
  std::remove("cli_oracle.csv");
  std::remove("cli_optima.txt");
}

TEST_CASE("verify runs a fast suite") {
  CHECK(run("--out cli_verify.json verify --suite oracle") == 0);
  const std::string v = slurp("cli_verify.json");
  CHECK(v.find("\"passed\": true") != std::string::npos);
  std::remove("cli_verify.json");
}

TEST_CASE("optimize reports an estimate and dumps the field") {
  CHECK(run("--seed 4 --out cli_opt.json optimize --dim 1 --lambda 0.3 "
            "--grid-n 256 --field-out cli_field.bin") == 0);
  const std::string j = slurp("cli_opt.json");
  CHECK(j.find("\"estimate\"") != std::string::npos);
  CHECK(j.find("\"converged\": true") != std::string::npos);
  const std::string field = slurp("cli_field.bin");
  CHECK(field.size() == 16u + 8u * 256u);
  std::remove("cli_opt.json");
  std::remove("cli_field.bin");
}
