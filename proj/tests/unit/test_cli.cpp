#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "thzsaga/data_io.hpp"
#include "thzsaga/path.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(THZSAGA_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

std::string atm(const char* name) { return thz::resolve_ref(std::string("atmospheres/") + name).string(); }
std::string scenario(const char* name) { return testing::source_path(std::string("scenarios/") + name); }

}  // namespace

TEST_CASE("cli usage errors exit 2") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("xsec --f 1e11:1e12:10").status == 2);
  CHECK(run("xsec --water-drop-d 2e-3 --gas h2o --f 1e11:1e12:10").status == 2);
  CHECK(run("xsec --water-drop-d 2e-3 --f 1e11:1e12").status == 2);
  CHECK(run("xsec --gas xenon --f 1e11:1e12:3").status == 2);
  CHECK(run("profile /no/such/file.atm --h 0:1000:3").status == 2);
  CHECK(run("loss " + atm("saturated.atm") + " --f 1e11:2e11:2").status == 2);
  CHECK(run("budget /no/such/scenario.cfg").status == 2);
  CHECK(run("sweep " + scenario("table3.cfg")).status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("cli computation errors exit 1") {
  CHECK(run("xsec --water-drop-d 2e-3 --f 1e10:1e12:5").status == 1);
  CHECK(run("xsec --electron --ne 1e22 --f 1e11:2e11:2").status == 1);
}

TEST_CASE("cli xsec") {
  const RunResult r = run("xsec --water-drop-d 2e-3 --f 0.1e12:1e12:100");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 101);
  CHECK(ls[0] == "f_hz,sigma_a_m2,sigma_s_m2,mechanism");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    const double a = std::stod(f[1]), s = std::stod(f[2]);
    CHECK(a > 1e-6);
    CHECK(a < 1e-5);
    CHECK(s > a);
    CHECK(f[3] == "mie");
  }

  const RunResult e = run("xsec --electron --f 0.1e12:1e12:5");
  REQUIRE(e.status == 0);
  const auto el = lines(e.out);
  REQUIRE(el.size() == 6);
  const std::string s0 = fields(el[1])[2];
  for (std::size_t i = 2; i < el.size(); ++i) CHECK(fields(el[i])[2] == s0);
  CHECK(std::abs(std::stod(s0) - 6.6524e-29) < 1e-32);

  const RunResult fog = run("xsec --water-drop-d 2e-5 --f 0.1e12:1e12:4");
  REQUIRE(fog.status == 0);
  CHECK(fields(lines(fog.out)[1])[3] == "rayleigh");
  const RunResult gas = run("xsec --gas h2o --f 0.1e12:1e12:4");
  REQUIRE(gas.status == 0);
  CHECK(fields(lines(gas.out)[1])[3] == "molecular");
}

TEST_CASE("cli profile") {
  const RunResult r = run("profile " + atm("saturated.atm") + " --h 0:20000:5");
  REQUIRE(r.status == 0);
  std::vector<double> vapour;
  for (const auto& l : lines(r.out)) {
    const auto f = fields(l);
    if (f.size() == 4 && f[2] == "h2o") vapour.push_back(std::stod(f[3]));
  }
  REQUIRE(vapour.size() == 5);  // 0, 5, 10, 15, 20 km
  CHECK(vapour[0] > vapour[1]);
  CHECK(vapour[1] > vapour[2]);
  CHECK(vapour[2] == vapour[3]);  // isothermal above the tropopause
  CHECK(vapour[4] == 0.0);
}

TEST_CASE("cli loss matches the library") {
  const RunResult r = run("loss " + atm("saturated.atm") + " --vertical 0:10000 --theta 1.5708 --f 321e9:1000e9:200");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 201);
  const thz::AtmosphereModel m = thz::load_atmosphere_file(atm("saturated.atm"));
  const thz::PathEvaluator eval(m, thz::PathGeometry::slant(0.0, 10000.0, 1.5708));
  for (std::size_t i : {std::size_t(1), std::size_t(77), std::size_t(200)}) {
    const auto f = fields(ls[i]);
    const thz::LossBreakdown l = eval.total(std::stod(f[0]));
    CHECK(std::abs(std::stod(f[4]) - l.molecular_db) <= 0.005);
    CHECK(std::abs(std::stod(f[6]) - l.total_db) <= 0.005);
  }
}

TEST_CASE("cli budget table3") {
  const RunResult r = run("budget " + scenario("table3.cfg"));
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 11);
  const auto nrs = fields(ls[1]);
  CHECK(nrs[0] == "NRS");
  CHECK(std::abs(std::stod(nrs[4]) - 194.00) <= 0.05);
  CHECK(std::abs(std::stod(nrs[11]) - -71.70) <= 0.01);
  const auto la1 = fields(ls[3]);
  CHECK(std::abs(std::stod(la1[4]) - 154.86) <= 0.05);
  CHECK(std::abs(std::stod(la1[11]) - -77.98) <= 0.01);
  CHECK(run("budget " + scenario("table3.cfg")).out == r.out);
}

TEST_CASE("cli sweep with a single point equals loss") {
  const RunResult s = run("sweep " + scenario("table3.cfg") + " --f 217.5e9:217.5e9:1");
  REQUIRE(s.status == 0);
  const auto sl = lines(s.out);
  REQUIRE(sl.size() >= 3);
  CHECK(sl[0].rfind("# scenario=table3 link=NRS hop=NRS", 0) == 0);
  const RunResult l = run("loss " + atm("saturated.atm") + " --vertical 0:550000 --f 217.5e9:217.5e9:1");
  REQUIRE(l.status == 0);
  const auto ll = lines(l.out);
  CHECK(sl[1] == ll[0]);
  CHECK(sl[2] == ll[1]);
}

TEST_CASE("cli output file, band flags and data-dir") {
  const std::string out = (thz::fs::temp_directory_path() / "thzsaga_cli_out.csv").string();
  const RunResult r =
      run("--out " + out + " loss " + atm("saturated.atm") + " --vertical 0:10000 --band-ghz 130,134 --band-points 5 "
          "--rain-rate-mmhr 50 --cloud-top-m 5000");
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(lines(ss.str())[0] == "# method=trapezoid:5");
  thz::fs::remove(out);

  CHECK(run("--data-dir /no/such/dir xsec --gas h2o --f 1e11:2e11:2").status == 2);
  CHECK(run("--data-dir " + thz::data_dir().string() + " xsec --gas h2o --f 1e11:2e11:2").status == 0);
  CHECK(run("--threads 2 --scientific loss " + atm("dry.atm") + " --horizontal 0:1000 --f 1e11:2e11:3").status == 0);
  CHECK(run("loss " + atm("dry.atm") + " --ground-distance 0:10000:50000 --f 1e11:2e11:3").status == 0);
}
