#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "varbw/errors.hpp"
#include "varbw/io.hpp"
#include "varbw/selftest.hpp"
#include "varbw/signret.hpp"

using namespace varbw;
namespace fs = std::filesystem;

namespace {

const std::string kData = DATA_DIR;
const std::string kCli = CLI_BIN;

std::string tmp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("varbw_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

double max_value_diff(const GridFunction& a, const GridFunction& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.x[i] - b.x[i]));
    worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("doubles round-trip through their shortest decimal form") {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("profile json round trip and diagnostics") {
  const std::string dir = tmp_dir("profile");
  Eigen::VectorXd b(2), v(3);
  b << -1.25, 0.7531;
  v << 0.3333333333333333, 2.0, 4.4;
  write_profile_json(dir + "/p.json", make_profile(b, v));
  const BandwidthProfile back = read_profile_json(dir + "/p.json");
  CHECK((back.breakpoints - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.values - v).cwiseAbs().maxCoeff() == 0.0);

  write(dir + "/bad1.json", "{\"breakpoints\": [0, 0], \"values\": [1, 2, 3]}\n");
  CHECK_THROWS_WITH_AS(read_profile_json(dir + "/bad1.json"),
                       doctest::Contains("NonIncreasingBreakpoints"), Error);
  write(dir + "/bad2.json", "{\"breakpoints\": [0], \"values\": [1, -1]}\n");
  CHECK_THROWS_WITH_AS(read_profile_json(dir + "/bad2.json"),
                       doctest::Contains("NonPositiveValue"), Error);
  write(dir + "/bad3.json", "{\"values\": [1]}\n");
  CHECK_THROWS_WITH_AS(read_profile_json(dir + "/bad3.json"),
                       doctest::Contains("ParseError"), Error);
}

TEST_CASE("density csv round trip preserves every bit") {
  const std::string dir = tmp_dir("density");
  Rng rng(5);
  const SpectralDensityPair d = smooth_density(rng, 17, 1.37);
  write_density_csv(dir + "/d.csv", d);
  const SpectralDensityPair back = read_density_csv(dir + "/d.csv");
  CHECK((back.zeta - d.zeta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.g_minus - d.g_minus).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.g_plus - d.g_plus).cwiseAbs().maxCoeff() == 0.0);

  write(dir + "/bad.csv", "zeta,re_gminus\n1,2\n");
  CHECK_THROWS_WITH_AS(read_density_csv(dir + "/bad.csv"),
                       doctest::Contains(":1:"), Error);
}

TEST_CASE("grid function csv round trips in both layouts") {
  const std::string dir = tmp_dir("gridfn");
  Rng rng(6);
  Eigen::VectorXd x(5);
  x << -2, -1, 0, 1.5, 2.25;
  Eigen::VectorXd rv(5);
  for (int i = 0; i < 5; ++i) rv[i] = rng.normal();
  const GridFunction real = GridFunction::real(x, rv);
  write_grid_function_csv(dir + "/r.csv", real, "m");
  CHECK(slurp(dir + "/r.csv").substr(0, 4) == "x,m\n");
  CHECK(max_value_diff(read_grid_function_csv(dir + "/r.csv"), real) == 0.0);

  Eigen::VectorXcd cv(5);
  for (int i = 0; i < 5; ++i) cv[i] = rng.cnormal();
  const GridFunction cplx = GridFunction::complex(x, cv);
  write_grid_function_csv(dir + "/c.csv", cplx);
  const GridFunction cback = read_grid_function_csv(dir + "/c.csv");
  CHECK(cback.complex_valued);
  CHECK(max_value_diff(cback, cplx) == 0.0);
}

TEST_CASE("csv parser reports the offending line") {
  const std::string dir = tmp_dir("parse");
  write(dir + "/bad.csv", "x,m\n1,2\n3,oops\n");
  try {
    read_grid_function_csv(dir + "/bad.csv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
}

TEST_CASE("cli validates profiles") {
  CHECK(run("profile validate --profile " + kData + "/n1_demo_profile.json") == 0);
  const std::string dir = tmp_dir("cli_profile");
  write(dir + "/bad.json", "{\"breakpoints\": [0], \"values\": [1, -4]}\n");
  CHECK(run("profile validate --profile " + dir + "/bad.json") == 2);
}

TEST_CASE("cli synthesis reproduces the committed golden output") {
  const std::string dir = tmp_dir("cli_synth");
  const std::string cmd = "synth --profile " + kData +
                          "/n1_demo_profile.json --lambda 4 --density " + kData +
                          "/n1_demo_density.csv --window 12 --samples 1201 --out ";
  REQUIRE(run(cmd + dir) == 0);
  const GridFunction got = read_grid_function_csv(dir + "/synth.csv");
  const GridFunction golden =
      read_grid_function_csv(kData + "/golden_synth.csv");
  CHECK(max_value_diff(got, golden) <= 1e-9);

  SUBCASE("same configuration is byte-identical") {
    const std::string dir2 = tmp_dir("cli_synth2");
    REQUIRE(run(cmd + dir2) == 0);
    CHECK(slurp(dir + "/synth.csv") == slurp(dir2 + "/synth.csv"));
  }
  SUBCASE("zero density synthesizes the zero function") {
    SpectralDensityPair zero = read_density_csv(kData + "/n1_demo_density.csv");
    zero.g_minus.setZero();
    zero.g_plus.setZero();
    write_density_csv(dir + "/zero.csv", zero);
    REQUIRE(run("synth --profile " + kData +
                "/n1_demo_profile.json --lambda 4 --density " + dir +
                "/zero.csv --window 12 --samples 101 --out " + dir) == 0);
    CHECK(read_grid_function_csv(dir + "/synth.csv").max_abs() == 0.0);
  }
  SUBCASE("malformed density exits with the input-error code") {
    write(dir + "/mangled.csv", "zeta,re_gminus,im_gminus,re_gplus,im_gplus\n1,2\n");
    CHECK(run("synth --profile " + kData +
              "/n1_demo_profile.json --lambda 4 --density " + dir +
              "/mangled.csv --out " + dir) == 2);
  }
}

TEST_CASE("cli kernel compares the two routes in the sidecar") {
  const std::string dir = tmp_dir("cli_kernel");
  REQUIRE(run("kernel --profile " + kData +
              "/n1_demo_profile.json --lambda 4 --mode generic "
              "--xgrid -5:5:11 --ygrid -5:5:11 --out " + dir) == 0);
  const std::string meta = slurp(dir + "/kernel_meta.json");
  const auto pos = meta.find("closed_form_max_rel_diff");
  REQUIRE(pos != std::string::npos);
  const double diff = std::strtod(meta.c_str() + meta.find(':', pos) + 1, nullptr);
  CHECK(diff <= 1e-6);
  CHECK(slurp(dir + "/kernel.csv").substr(0, 6) == "x,y,k\n");

  SUBCASE("toy mode needs a single jump") {
    const std::string d2 = tmp_dir("cli_kernel2");
    write(d2 + "/two.json",
          "{\"breakpoints\": [-1, 1], \"values\": [1, 2, 3]}\n");
    CHECK(run("kernel --profile " + d2 + "/two.json --lambda 4 --mode toy --out " +
              d2) == 2);
  }
}

TEST_CASE("cli sign retrieval reproduces the committed reconstruction") {
  const std::string dir = tmp_dir("cli_signret");
  REQUIRE(run("signret --profile " + kData +
              "/n1_demo_profile.json --lambda 4 --magnitude " + kData +
              "/n1_demo_magnitude.csv --zero-tol 0.04 --out " + dir) == 0);
  const GridFunction got = read_grid_function_csv(dir + "/reconstruction.csv");
  const GridFunction golden =
      read_grid_function_csv(kData + "/golden_reconstruction.csv");
  // Equality up to one global sign.
  double same = 0.0, negated = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    same = std::max(same, std::abs(got.v[i] - golden.v[i]));
    negated = std::max(negated, std::abs(got.v[i] + golden.v[i]));
  }
  CHECK(std::min(same, negated) <= 1e-9);
  const std::string pattern = slurp(dir + "/pattern.json");
  CHECK(pattern.find("\"pattern\"") != std::string::npos);
  CHECK(pattern.find("\"residuals\"") != std::string::npos);

  SUBCASE("zero magnitude is flagged, not an error") {
    GridFunction m = read_grid_function_csv(kData + "/n1_demo_magnitude.csv");
    m.v.setZero();
    write_grid_function_csv(dir + "/zero.csv", m, "m");
    CHECK(run("signret --profile " + kData +
              "/n1_demo_profile.json --lambda 4 --magnitude " + dir +
              "/zero.csv --out " + dir) == 0);
    CHECK(slurp(dir + "/pattern.json").find("ZeroFunction") != std::string::npos);
  }
  SUBCASE("negative magnitudes are an input error") {
    GridFunction m = read_grid_function_csv(kData + "/n1_demo_magnitude.csv");
    m.v[10] = -1.0;
    write_grid_function_csv(dir + "/neg.csv", m, "m");
    CHECK(run("signret --profile " + kData +
              "/n1_demo_profile.json --lambda 4 --magnitude " + dir +
              "/neg.csv --out " + dir) == 2);
  }
}

TEST_CASE("cli projection writes the result and its truncation report") {
  const std::string dir = tmp_dir("cli_project");
  Eigen::VectorXd x(201), v(201);
  for (int i = 0; i < 201; ++i) {
    x[i] = -20.0 + 0.2 * i;
    v[i] = std::exp(-x[i] * x[i]);
  }
  write_grid_function_csv(dir + "/f.csv", GridFunction::real(x, v), "value");
  CHECK(run("project --c 2.0 --input " + dir + "/f.csv --out " + dir) == 0);
  CHECK(slurp(dir + "/projection_meta.json").find("edge_to_peak") !=
        std::string::npos);
  const GridFunction proj = read_grid_function_csv(dir + "/projection.csv");
  CHECK(proj.size() == 201);
}

TEST_CASE("cli sampling sweep emits the success table") {
  const std::string dir = tmp_dir("cli_sweep");
  CHECK(run("experiment sampling-sweep --profile " + kData +
            "/n1_demo_profile.json --lambda 2 --seed 7 --window 16 --out " +
            dir) == 0);
  const std::string csv = slurp(dir + "/sweep.csv");
  CHECK(csv.substr(0, 36) == "step,samples,recovered,winner_ratio\n");
  // Seed is mandatory.
  CHECK(run("experiment sampling-sweep --profile " + kData +
            "/n1_demo_profile.json --lambda 2 --out " + dir) == 2);
}
