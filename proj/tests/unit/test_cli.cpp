#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using qdeform::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qdeform_cli_" + name);
  fs::remove_all(p);
  return p;
}

struct GoldenCase {
  const char* file;
  std::vector<std::string> args;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.file; }

const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"eval_eq.csv", {"eval", "--fn", "Eq", "--range", "0:2:0.5", "--q", "0.9"}},
      {"eval_sq.json", {"eval", "--fn", "Sq", "--points", "0.5,1.5", "--q", "0.8", "--format", "json"}},
      {"qderiv_cubic.csv", {"qderiv", "--expr", "x^3", "--points", "0.5,1,2", "--q", "0.9"}},
      {"qint_gauss.csv", {"qint", "--expr", "gauss(x)", "--domain", "halfline", "--q", "0.9"}},
      {"solve_oscillator.json",
       {"solve", "--potential", "x^2/2", "--k", "3", "--lattice", "-6:40", "--q", "0.85"}},
  };
  return cases;
}

}  // namespace

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, MatchesFileAndIsDeterministic) {
  const GoldenCase& c = GetParam();
  const fs::path path = fs::path(QDEFORM_GOLDEN_DIR) / c.file;
  const Result first = invoke(c.args);
  ASSERT_EQ(first.code, 0) << first.err;
  if (std::getenv("QDEFORM_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << first.out;
  }
  EXPECT_EQ(invoke(c.args).out, first.out);
  EXPECT_EQ(first.out, slurp(path)) << path;
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(golden_cases()),
                         [](const auto& info) {
                           std::string n = info.param.file;
                           for (char& ch : n) {
                             if (ch == '.') ch = '_';
                           }
                           return n;
                         });

TEST(Cli, EvalAgreesWithExtendedPrecision) {
  const Result r = invoke({"eval", "--fn", "Cq", "--range", "-3:3:0.5", "--q", "0.7"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,re,im,terms_used");
  int rows = 0;
  while (std::getline(in, line)) {
    double x, re, im;
    int terms;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &x, &re, &im, &terms), 4) << line;
    const auto want = oracle::special(oracle::Series::cos, x, 0.7);
    EXPECT_NEAR(re, want.real(), 1e-14 * std::max(1.0, std::abs(want)));
    ++rows;
  }
  EXPECT_EQ(rows, 13);
}

TEST(Cli, RangeCountIncludesEndpoint) {
  const Result r = invoke({"eval", "--fn", "Eq", "--range", "0:2:0.1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 22);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"solve", "--help"}).code, 0);
  EXPECT_EQ(invoke({"eval", "--fn", "Zq", "--points", "1"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--points", "1", "--range", "0:1:0.5"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--range", "1:0:0.1"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--points", "1", "--q", "-1"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--points", "1", "--q", "abc"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--points", "1", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"qderiv", "--expr", "x +", "--points", "1"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--q", "1"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--lattice", "5:3"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--lattice", "a:b"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--k", "-1"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--k", "1000"}).code, 2);
  EXPECT_EQ(invoke({"evolve", "--psi0", "gauss(x)", "--dt", "0"}).code, 2);
}

TEST(Cli, ComputationFailuresExitOne) {
  const Result pole = invoke({"qderiv", "--expr", "1/(x - 0.9)", "--points", "1"});
  EXPECT_EQ(pole.code, 1);
  EXPECT_EQ(pole.err.rfind("error: ", 0), 0u) << pole.err;
  EXPECT_EQ(invoke({"eval", "--fn", "Eq", "--points", "1e6", "--q", "0.999"}).code, 1);
  EXPECT_EQ(invoke({"solve", "--potential", "sqrt(x)"}).code, 1);
  EXPECT_EQ(invoke({"evolve", "--psi0", "0"}).code, 1);
  const Result probes = invoke({"verify", "--q", "0.9", "--tol", "1e-30"});
  EXPECT_EQ(probes.code, 1);
  EXPECT_NE(probes.err.find("wave_equation"), std::string::npos);
}

TEST(Cli, VerifyExplicitQ) {
  const Result r = invoke({"verify", "--q", "0.9"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("identity,statement,max_residual,contract,status,checks\n", 0), 0u);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, EnvironmentSuppliesDefaults) {
  ::setenv("QDEFORM_Q", "0.8", 1);
  ::setenv("QDEFORM_FORMAT", "json", 1);
  const Result env = invoke({"eval", "--fn", "Sq", "--points", "0.5,1.5"});
  ::unsetenv("QDEFORM_Q");
  ::unsetenv("QDEFORM_FORMAT");
  EXPECT_EQ(env.code, 0);
  EXPECT_EQ(env.out, invoke({"eval", "--fn", "Sq", "--points", "0.5,1.5", "--q", "0.8", "--format", "json"}).out);
}

TEST(Cli, OutputFile) {
  const fs::path dir = scratch("output");
  fs::create_directories(dir);
  const fs::path file = dir / "e.csv";
  const Result r = invoke({"eval", "--fn", "Eq", "--points", "1", "--output", file.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(file), invoke({"eval", "--fn", "Eq", "--points", "1"}).out);
  fs::remove_all(dir);
}

TEST(Cli, SolveWritesSpectrumAndEigenfunctions) {
  const fs::path dir = scratch("solve");
  const Result r = invoke({"solve", "--potential", "x^2", "--k", "2", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  EXPECT_EQ(doc["eigenvalues"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "eigenfunction_0000.csv"));
  EXPECT_TRUE(fs::exists(dir / "eigenfunction_0001.csv"));
  EXPECT_FALSE(fs::exists(dir / "eigenfunction_0002.csv"));
  fs::remove_all(dir);

  const Result empty = invoke({"solve", "--k", "0"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(empty.out)["eigenvalues"].empty());
}

TEST(Cli, EvolveConservesNorm) {
  const fs::path dir = scratch("evolve");
  const Result r = invoke({"evolve", "--potential", "x^2/2", "--psi0", "gauss(x - 0.5)", "--t", "1",
                           "--dt", "0.1", "--every", "5", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"psi_0000.csv", "psi_0005.csv", "psi_0010.csv", "series.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_FALSE(fs::exists(dir / "psi_0003.csv"));
  std::istringstream in(slurp(dir / "series.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,t,norm,energy");
  double e0 = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    int step;
    double t, n, e;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &step, &t, &n, &e), 4);
    if (rows == 0) e0 = e;
    EXPECT_NEAR(n, 1.0, 1e-12);
    EXPECT_NEAR(e, e0, 1e-10);
    ++rows;
  }
  EXPECT_EQ(rows, 11);
  fs::remove_all(dir);
}
