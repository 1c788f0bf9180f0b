#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qref/driving.hpp"
#include "qref/lindblad.hpp"
#include "qref/model.hpp"
#include "qref/photon_stats.hpp"

// Drives the installed binary end to end through a shell, the same way a
// user would.
namespace {

struct CmdResult {
  int exit_code;
  std::string out;
};

std::string temp_path(const std::string& tag) {
  return "cli_" + tag + "_" + std::to_string(::getpid()) + ".tmp";
}

CmdResult run_cli(const std::string& args, const std::string& tag) {
  const std::string path = temp_path(tag);
  const std::string cmd = std::string(QREF_CLI_PATH) + " " + args + " > " + path + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

// Value of "key=..." in a single-record text output.
double text_field(const std::string& out, const std::string& key) {
  const std::string needle = key + "=";
  std::stringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(needle, 0) == 0) return std::strtod(line.c_str() + needle.size(), nullptr);
  }
  FAIL("missing field ", key, " in:\n", out);
  return 0.0;
}

std::string text_field_str(const std::string& out, const std::string& key) {
  const std::string needle = key + "=";
  std::stringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(needle, 0) == 0) return line.substr(needle.size());
  }
  FAIL("missing field ", key, " in:\n", out);
  return "";
}

std::vector<std::vector<std::string>> csv_rows(const std::string& out) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("statistic", 0) == 0 || line.rfind("nbar_e", 0) == 0) continue;  // header
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("point reproduces the library flux at the default operating point") {
  const CmdResult r = run_cli("point --stat coherent --mean 10", "pt");
  REQUIRE_EQ(r.exit_code, 0);
  const qref::RefrigeratorParams p;
  const double j_lib = qref::flux(p, qref::PhotonDistribution::coherent(10.0)).j_bar;
  CHECK_EQ(text_field(r.out, "j_bar"), j_lib);  // %.17g round-trips exactly
  CHECK_EQ(text_field(r.out, "q_c"), j_lib * 1.0);
  CHECK_EQ(text_field_str(r.out, "status"), "cooling");
  CHECK_EQ(text_field(r.out, "cop"), 1.0);
  CHECK_EQ(text_field_str(r.out, "route"), "laplace");
  CHECK(text_field(r.out, "crosscheck") < 1e-12);
  CHECK_EQ(text_field_str(r.out, "flagged"), "0");
}

TEST_CASE("point at zero intensity reports an inactive machine") {
  const CmdResult r = run_cli("point --stat coherent --mean 0", "zero");
  REQUIRE_EQ(r.exit_code, 0);
  CHECK_EQ(text_field(r.out, "j_bar"), 0.0);
  CHECK_EQ(text_field(r.out, "q_c"), 0.0);
  CHECK_EQ(text_field(r.out, "q_h"), 0.0);
  CHECK_EQ(text_field(r.out, "q_e"), 0.0);
  CHECK_EQ(text_field_str(r.out, "status"), "inactive");
  CHECK(std::isnan(text_field(r.out, "cop")));
}

TEST_CASE("point reports heating for swapped occupations") {
  const CmdResult r = run_cli("point --nbar-c 0.5 --nbar-h 1 --stat thermal --mean 5", "heat");
  REQUIRE_EQ(r.exit_code, 0);
  CHECK(text_field(r.out, "j_bar") < 0.0);
  CHECK_EQ(text_field_str(r.out, "status"), "heating");
  CHECK(std::isnan(text_field(r.out, "cop")));
}

TEST_CASE("point accepts a custom probability table") {
  const std::string table = temp_path("pn");
  {
    std::ofstream f(table);
    f << "0.5 0.25\n0.25\n";
  }
  const CmdResult r = run_cli("point --stat custom --custom-pn " + table, "custom");
  std::remove(table.c_str());
  REQUIRE_EQ(r.exit_code, 0);
  CHECK_EQ(text_field(r.out, "mean_photons"), 0.75);
  const qref::RefrigeratorParams p;
  const double j_lib =
      qref::flux(p, qref::PhotonDistribution::custom({0.5, 0.25, 0.25})).j_bar;
  CHECK_EQ(text_field(r.out, "j_bar"), j_lib);
}

TEST_CASE("exit codes separate usage, domain and io failures") {
  CHECK_EQ(run_cli("point --stat bogus", "u1").exit_code, 2);
  CHECK_EQ(run_cli("point --mean 5 --lambda 3", "u2").exit_code, 2);
  CHECK_EQ(run_cli("sweep --grid 5:1:10", "u3").exit_code, 2);
  CHECK_EQ(run_cli("", "u4").exit_code, 2);  // missing subcommand
  CHECK_EQ(run_cli("point --gamma -1", "d1").exit_code, 3);
  CHECK_EQ(run_cli("point --lambda -2", "d2").exit_code, 3);
  CHECK_EQ(run_cli("sweep --grid 0.1:10:3 --out /nonexistent_dir/x.csv", "io1").exit_code, 4);
  CHECK_EQ(run_cli("point --stat custom --custom-pn /no/such/file", "io2").exit_code, 4);
  CHECK_EQ(run_cli("--version", "v").exit_code, 0);
  CHECK_EQ(run_cli("point --help", "h").exit_code, 0);
}

TEST_CASE("sweep emits ordered rows and is byte-identical across reruns") {
  const std::string args = "sweep --grid 0.5:50:4:log";
  const CmdResult a = run_cli(args, "s1");
  const CmdResult b = run_cli(args, "s2");
  REQUIRE_EQ(a.exit_code, 0);
  CHECK_EQ(a.out, b.out);

  const auto rows = csv_rows(a.out);
  REQUIRE_EQ(rows.size(), 16);  // 4 statistics x 4 grid points
  REQUIRE_EQ(rows[0].size(), 12);

  // Same-mean rows across statistics: |j_bar| ordered sub >= coh >= super >= th.
  for (int g = 0; g < 4; ++g) {
    const double j_coh = std::abs(std::strtod(rows[g][4].c_str(), nullptr));
    const double j_th = std::abs(std::strtod(rows[4 + g][4].c_str(), nullptr));
    const double j_sub = std::abs(std::strtod(rows[8 + g][4].c_str(), nullptr));
    const double j_sup = std::abs(std::strtod(rows[12 + g][4].c_str(), nullptr));
    CHECK(j_sub >= j_coh);
    CHECK(j_coh >= j_sup);
    CHECK(j_sup >= j_th);
  }

  // Header comment records the tool version and the full parameter set.
  CHECK(a.out.rfind("# qref ", 0) == 0);
  CHECK(a.out.find("xi0=") != std::string::npos);
  CHECK(a.out.find("nbar_c=") != std::string::npos);
}

TEST_CASE("sweep by the native parameter hits requested lambdas") {
  const CmdResult r = run_cli("sweep --stat sub --grid 4:4:1 --by-lambda", "bylam");
  REQUIRE_EQ(r.exit_code, 0);
  const auto rows = csv_rows(r.out);
  REQUIRE_EQ(rows.size(), 1);
  CHECK_EQ(std::strtod(rows[0][1].c_str(), nullptr), 4.0);
  const double mean = std::strtod(rows[0][2].c_str(), nullptr);
  CHECK(mean == doctest::Approx(qref::PhotonDistribution::sub_poisson(4.0).mean()));
}

TEST_CASE("flags beat the config file which beats built-in defaults") {
  const std::string conf = temp_path("conf");
  {
    std::ofstream f(conf);
    f << "xi0=0.7\nnbar-c=2\n";
  }
  const CmdResult defaults = run_cli("point --stat coherent --mean 4", "c0");
  const CmdResult from_conf =
      run_cli("point --config " + conf + " --stat coherent --mean 4", "c1");
  const CmdResult overridden =
      run_cli("point --config " + conf + " --xi0 2 --stat coherent --mean 4", "c2");
  std::remove(conf.c_str());

  CHECK(text_field(defaults.out, "intensity_x") == doctest::Approx(1.1 * 1.1 * 4.0));
  CHECK(text_field(from_conf.out, "intensity_x") == doctest::Approx(0.7 * 0.7 * 4.0));
  CHECK(text_field(overridden.out, "intensity_x") == doctest::Approx(2.0 * 2.0 * 4.0));
  // nbar-c=2 from the config stays active under the flag override of xi0.
  CHECK(text_field(overridden.out, "j_bar") > text_field(defaults.out, "j_bar"));
}

TEST_CASE("thermal-bath scan flips status exactly once at the threshold") {
  // Grid chosen to straddle nbar_e = 2 without landing on it.
  const CmdResult r = run_cli("thermal-bath --kappa 0.1 --grid 0.5:4:6", "bath");
  REQUIRE_EQ(r.exit_code, 0);
  const auto rows = csv_rows(r.out);
  REQUIRE_EQ(rows.size(), 6);
  int flips = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][5] != rows[i - 1][5]) ++flips;
  }
  CHECK_EQ(flips, 1);
  // The constant threshold column carries the analytic root nbar_e = 2.
  for (const auto& row : rows) CHECK_EQ(std::strtod(row[6].c_str(), nullptr), 2.0);
  // Sign of j_prime agrees with the status column on both sides.
  CHECK(std::strtod(rows[0][1].c_str(), nullptr) < 0.0);
  CHECK_EQ(rows[0][5], "heating");
  CHECK(std::strtod(rows[5][1].c_str(), nullptr) > 0.0);
  CHECK_EQ(rows[5][5], "cooling");
}

TEST_CASE("check subcommand is deterministic and honors presets") {
  const CmdResult a = run_cli("check --grid quick --seed 7", "k1");
  const CmdResult b = run_cli("check --grid quick --seed 7", "k2");
  REQUIRE_EQ(a.exit_code, 0);
  CHECK_EQ(a.out, b.out);
  CHECK(a.out.find("status=PASS") != std::string::npos);
  CHECK(a.out.find("status=FAIL") == std::string::npos);
  CHECK(a.out.find("ALL PASS") != std::string::npos);

  const CmdResult none = run_cli("check --grid none", "k3");
  CHECK_EQ(none.exit_code, 0);
  CHECK(none.out.find("(0 checks)") != std::string::npos);

  const CmdResult other = run_cli("check --grid quick --seed 8", "k4");
  CHECK_EQ(other.exit_code, 0);
  CHECK_NE(a.out, other.out);
}
