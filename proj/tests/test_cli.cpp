// End-to-end exercises of the CLI binary, located via the SDW_CLI
// environment variable that the build sets for this test.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "sdw/io.hpp"
#include "sdw/transform.hpp"

namespace {

std::string cli() {
  const char* p = std::getenv("SDW_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SDW_CLI must point at the CLI binary");
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " > cli_out.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("tile exports the figure CSV") {
  CHECK(run("tile --L 128 --lambda 2 --J 5 --output cli_tile.csv") == 0);
  std::ifstream in("cli_tile.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "ell,scaling_sq,kappa0_sq,kappa1_sq,kappa2_sq,kappa3_sq,kappa4_sq,kappa5_sq,sum");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 128);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("tile --lambda 2 --output x.csv") == 2);        // missing --L
  CHECK(run("nonsense-subcommand") == 2);                   // unknown subcommand
  CHECK(run("tile --L 128 --J 99 --output x.csv") == 2);    // J beyond the maximum scale
}

TEST_CASE("data errors exit with code 3") {
  CHECK(run("analyze --input does_not_exist.sdwalm --output-dir cli_wc") == 3);
  {
    std::ofstream bad("cli_bad.sdwalm", std::ios::binary);
    bad << "garbage";
  }
  CHECK(run("analyze --input cli_bad.sdwalm --output-dir cli_wc") == 3);
}

TEST_CASE("simulate, analyze, synthesize round trip through files") {
  CHECK(run("simulate --L 16 --g1 1 --alpha-spec 2 --seed 11 --output cli_f.sdwalm") == 0);
  CHECK(run("analyze --input cli_f.sdwalm --lambda 2 --N 3 --output-dir cli_wc") == 0);
  CHECK(run("synthesize --L 16 --lambda 2 --N 3 --input-dir cli_wc --output cli_back.sdwalm") ==
        0);
  const auto f = sdw::read_alm("cli_f.sdwalm");
  const auto back = sdw::read_alm("cli_back.sdwalm");
  CHECK(back.max_abs_diff(f) < 1e-10);
}

TEST_CASE("analyze accepts a sampled map as input") {
  CHECK(run("simulate --L 16 --g1 1 --alpha-spec 2 --seed 12 --output cli_g.sdwalm "
            "--map-output cli_g.sdwmap") == 0);
  CHECK(run("analyze --input cli_g.sdwmap --lambda 2 --N 2 --output-dir cli_wcm") == 0);
  CHECK(run("synthesize --L 16 --lambda 2 --N 2 --input-dir cli_wcm --output cli_gback.sdwalm") ==
        0);
  const auto f = sdw::read_alm("cli_g.sdwalm");
  const auto back = sdw::read_alm("cli_gback.sdwalm");
  CHECK(back.max_abs_diff(f) < 1e-10);
}

TEST_CASE("unknown verify suite is a usage error") {
  CHECK(run("verify --L 32 --suite bogus") == 2);
}

TEST_CASE("steer check passes at the steerability tolerance") {
  CHECK(run("steer --L 32 --lambda 2 --N 3 --j 2 --gamma-deg 30 --check-only") == 0);
}

TEST_CASE("verify suite emits a report and exits zero") {
  CHECK(run("verify --L 32 --seed 1 --report cli_report.jsonl") == 0);
  std::ifstream in("cli_report.jsonl");
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    CHECK(line.find("{\"name\":\"") == 0);
    ++lines;
  }
  CHECK(lines >= 15);
}

TEST_CASE("correlation and localisation runs are byte-identical across job counts") {
  const std::string common =
      "--L 16 --lambda 2 --N 2 --g1 1 --alpha-spec 2 --n-sims 6 --seed 9 ";
  CHECK(run("correlation " + common + "--jobs 1 --output-prefix cli_c1") == 0);
  CHECK(run("correlation " + common + "--jobs 4 --output-prefix cli_c4") == 0);
  for (const std::string suffix : {"_analytic.csv", "_empirical.csv"}) {
    std::ifstream a("cli_c1" + suffix), b("cli_c4" + suffix);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }

  const std::string lcommon =
      "--L 16 --lambda 2 --N 2 --g1 1 --alpha-spec 2 --j 1 --n-sims 4 --seed 9 "
      "--mask-band 70,110 ";
  CHECK(run("localisation " + lcommon + "--jobs 1 --output-prefix cli_l1") == 0);
  CHECK(run("localisation " + lcommon + "--jobs 4 --output-prefix cli_l4") == 0);
  std::ifstream a("cli_l1_delta.sdwso3", std::ios::binary);
  std::ifstream b("cli_l4_delta.sdwso3", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("wavelet map export with auto-correlation CSV") {
  CHECK(run("wavelet --L 32 --lambda 2 --N 3 --j 2 --gamma-deg 0 --output cli_wav.csv "
            "--alm-output cli_wav.sdwalm --autocorr-output cli_gamma.csv") == 0);
  const auto psi = sdw::read_alm("cli_wav.sdwalm");
  CHECK(psi.band_limit() == 32);
  std::ifstream in("cli_wav.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta,phi,re,im");

  std::ifstream gin("cli_gamma.csv");
  std::getline(gin, header);
  CHECK(header == "dgamma,gamma_normalized,cos_power_reference");
  // for N = 3 inside the l >= N regime the two columns agree pointwise
  std::string line;
  while (std::getline(gin, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    REQUIRE(c1 != c2);
    const double g = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const double ref = std::stod(line.substr(c2 + 1));
    CHECK(std::abs(g - ref) < 1e-10);
  }
}

TEST_CASE("the dilation quadrature cache is honored") {
  std::filesystem::create_directories("cli_cache");
  const std::string env = "SDW_CACHE_DIR=cli_cache ";
  const std::string cmd = env + cli() +
                          " tile --L 16 --lambda 1.7 --output cli_tile_cache.csv > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  int cache_files = 0;
  for (const auto& e : std::filesystem::directory_iterator("cli_cache")) {
    (void)e;
    ++cache_files;
  }
  CHECK(cache_files == 1);
  // a second run consumes the cached denominator and reproduces the bytes
  std::filesystem::rename("cli_tile_cache.csv", "cli_tile_cache1.csv");
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream a("cli_tile_cache.csv"), b("cli_tile_cache1.csv");
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}
