#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "thzsaga/data_io.hpp"

using namespace thz;
using testing::error_code_of;
using testing::rel;

namespace {

std::string what_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* kAtmHeader = "surface_temperature_K = 298.15\n";

}  // namespace

TEST_CASE("kv parsing") {
  const KvDocument d = parse_kv("a = 1\n# c\n\n[sec]\nb = x y  # trailing\n", "t");
  REQUIRE(d.top.size() == 1);
  CHECK(d.top[0].key == "a");
  REQUIRE(d.sections.size() == 1);
  CHECK(d.sections[0].entries[0].value == "x y");
  CHECK(d.sections[0].entries[0].line == 5);
  CHECK(error_code_of([] { parse_kv("a = 1\na = 2\n", "t"); }) == ErrorCode::parse);
  CHECK(error_code_of([] { parse_kv("just words\n", "t"); }) == ErrorCode::parse);
  CHECK(contains(what_of([] { parse_kv("x = 1\n[s\n", "file.kv"); }), "file.kv:2"));
}

TEST_CASE("numbers") {
  CHECK(parse_double("1e3", "t") == 1000.0);
  CHECK(std::isinf(parse_double("inf", "t")));
  CHECK(error_code_of([] { parse_double("1.0x", "t"); }) == ErrorCode::parse);
  CHECK(parse_double_list("1, 2.5,3", "t") == std::vector<double>{1.0, 2.5, 3.0});
  for (double v : {0.1, 1.0 / 3.0, 2.4614924955148245e25, 6.02214076e22, -1.5e-300})
    CHECK(parse_double(format_double(v), "t") == v);
}

TEST_CASE("absorption tables") {
  const AbsorptionTable t = load_absorption_table("# species=x provenance=test\nfrequency_hz,sigma_m2\n1e11,1e-26\n2e11,3e-26\n", "t");
  CHECK(t.f_hz.size() == 2);
  CHECK(t.species == "x");
  CHECK(t.provenance == "test");
  CHECK(error_code_of([] { load_absorption_table("# species=x\nfrequency_hz,sigma_m2\n2e11,1\n1e11,1\n", "t"); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([] { load_absorption_table("# species=x\nfrequency_hz,sigma_m2\n1e11,1\n1e11,1\n", "t"); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([] { load_absorption_table("# species=x\nfrequency_hz,sigma_m2\n1e11,1\n2e11,-1\n", "t"); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([] { load_absorption_table("# species=x\nfrequency_hz,sigma_m2\n1e11,1\n", "t"); }) == ErrorCode::validation);
  const std::string bad = what_of([] { load_absorption_table("# species=x\nfrequency_hz,sigma_m2\n1e11,1\n2e11,abc\n", "t.csv"); });
  CHECK(contains(bad, "t.csv:4"));

  std::istringstream in("# species=x\nfrequency_hz,sigma_m2\n1e11,1e-26\n2e11,3e-26\n3e11,0\n");
  CHECK(load_absorption_table(in, "stream").f_hz.size() == 3);

  const auto& h2o = *default_species_catalog().at("h2o")->table;
  CHECK(h2o.f_min() <= 1e11);
  CHECK(h2o.f_max() >= 1e12);
  CHECK(contains(h2o.provenance, "P.676"));
}

TEST_CASE("drop spectra round-trip") {
  const auto p = resolve_ref("spectra/rain_land_2mm.csv");
  const DropSpectrum s = load_drop_spectrum(read_file(p), p.string());
  REQUIRE(s.bins.size() == 1);
  CHECK(s.bins[0].diameter_m == 2e-3);
  CHECK(s.bins[0].density_m3 == 1e3);
  const std::string saved = save_drop_spectrum(s);
  const DropSpectrum again = load_drop_spectrum(saved, "saved");
  CHECK(again.bins[0].diameter_m == s.bins[0].diameter_m);
  CHECK(again.bins[0].density_m3 == s.bins[0].density_m3);
  CHECK(again.rain_rate_mmhr == s.rain_rate_mmhr);
  CHECK(save_drop_spectrum(again) == saved);
  CHECK(error_code_of([] { load_drop_spectrum("diameter_m,density_m3\n2e-3,1\n1e-3,1\n", "t"); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([] { load_drop_spectrum("diameter_m,density_m3\n2e-3,-1\n", "t"); }) == ErrorCode::validation);
}

TEST_CASE("double-Debye parameter file") {
  const auto p = default_double_debye();
  CHECK(p->version == "liebe1991-p840");
  CHECK(p->variable == DoubleDebyeParams::TempVariable::inverse_theta);
  CHECK(error_code_of([] { load_double_debye("version = x\neps_s = 1\n", "t"); }) == ErrorCode::missing_key);
  const std::string unknown = "version = v\neps_s = 80\neps_1 = 5\neps_inf = 3\nfD1_hz = 2e10\nfD2_hz = 5e11\nbogus = 1\n";
  CHECK(error_code_of([&] { load_double_debye(unknown, "t"); }) == ErrorCode::unknown_key);
}

TEST_CASE("atmosphere files") {
  const AtmosphereModel m = load_atmosphere_file(resolve_ref("atmospheres/saturated.atm"));
  CHECK(m.gases.size() == 2);
  CHECK(m.plasma.size() == 2);
  CHECK(m.humidity == HumidityMode::saturated);

  const std::string saved = save_atmosphere(m);
  const AtmosphereModel again = load_atmosphere(saved, "saved", data_dir(), default_species_catalog());
  CHECK(save_atmosphere(again) == saved);
  CHECK(again.gas_density(0, 7000.0) == m.gas_density(0, 7000.0));

  std::string with_rain = std::string(kAtmHeader) +
                          "[hydrometeor]\nname = rain\nh_lo_m = 0\nh_hi_m = 1000\nbins = 2e-3:1000, 3e-3:10\n"
                          "temperature_K = 290\n";
  const AtmosphereModel r = load_atmosphere(with_rain, "t", data_dir(), default_species_catalog());
  REQUIRE(r.hydrometeors.size() == 1);
  CHECK(r.hydrometeors[0].bins.size() == 2);
  CHECK(save_atmosphere(load_atmosphere(save_atmosphere(r), "s", data_dir(), default_species_catalog())) ==
        save_atmosphere(r));

  const auto& cat = default_species_catalog();
  CHECK(contains(what_of([&] { load_atmosphere("humidity_mode = dry\n", "t", data_dir(), cat); }),
                 "surface_temperature_K"));
  CHECK(error_code_of([&] { load_atmosphere("humidity_mode = dry\n", "t", data_dir(), cat); }) ==
        ErrorCode::missing_key);
  CHECK(error_code_of([&] { load_atmosphere(std::string(kAtmHeader) + "colour = blue\n", "t", data_dir(), cat); }) ==
        ErrorCode::unknown_key);
  CHECK(error_code_of([&] {
          load_atmosphere(std::string(kAtmHeader) + "[hydrometeor]\nname = x\nh_lo_m = 0\nh_hi_m = 20000\nbins = 1e-3:1\n",
                          "t", data_dir(), cat);
        }) == ErrorCode::validation);
  CHECK(error_code_of([&] {
          load_atmosphere(std::string(kAtmHeader) + "[gas]\nname = unobtainium\nprofile = uniform\nsurface_density_m3 = 1\n",
                          "t", data_dir(), cat);
        }) == ErrorCode::validation);
}

TEST_CASE("scenario files") {
  const Scenario sc = load_scenario_file(testing::source_path("scenarios/table3.cfg"));
  CHECK(sc.p_total_w == 10.0);
  CHECK(sc.gain_db == 110.0);
  REQUIRE(sc.links.size() == 6);
  const HopSpec& nrs = sc.links[0].hops.at(0);
  CHECK(nrs.h0_m == 0.0);
  CHECK(nrs.h1_m == 550e3);
  CHECK(nrs.f_lo_hz == 209e9);
  CHECK(nrs.f_hi_hz == 226e9);
  CHECK(nrs.path().length == doctest::Approx(550e3).epsilon(1e-12));
  const HopSpec& lb1 = sc.links[2].hops.at(1);
  CHECK(lb1.h0_m == 10e3);
  CHECK(lb1.path().length == doctest::Approx(540e3).epsilon(1e-12));

  const std::string saved = save_scenario(sc);
  const Scenario again = load_scenario(saved, "saved", testing::source_path("scenarios"));
  CHECK(save_scenario(again) == saved);

  for (const char* t : {"table4", "table5", "table6", "table7", "table8"}) {
    const Scenario s = load_scenario_file(testing::source_path(std::string("scenarios/") + t + ".cfg"));
    CHECK(save_scenario(load_scenario(save_scenario(s), "s", testing::source_path("scenarios"))) == save_scenario(s));
  }

  const std::string base = "name = x\natmosphere = atmospheres/dry.atm\n";
  CHECK(contains(what_of([&] { load_scenario(base + "[link]\nlabel = a\n[hop]\nlabel = h\nh0_m = 0\nh1_m = 1\nelevation_rad = 1\n", "t", {}); }),
                 "band_ghz"));
  CHECK(error_code_of([&] {
          load_scenario(base + "[link]\nlabel = a\n[hop]\nlabel = h\nband_ghz = 1, 2\nh0_m = 0\nh1_m = 1\n"
                               "elevation_rad = 1\nfrobnicate = 1\n", "t", {});
        }) == ErrorCode::unknown_key);
  CHECK(error_code_of([&] { load_scenario("atmosphere = atmospheres/dry.atm\n", "t", {}); }) == ErrorCode::missing_key);
  CHECK(error_code_of([&] {
          load_scenario(base + "[link]\nlabel = a\n[hop]\nlabel = h\nband_ghz = 1, 2\nh0_m = 0\nh1_m = 1\n"
                               "elevation_rad = 1\nweather = nope\n", "t", {});
        }) == ErrorCode::validation);
}

TEST_CASE("report emission") {
  std::ostringstream empty;
  emit_loss_report({}, empty);
  CHECK(empty.str() == "f_hz,fspl_db,mie_db,rayleigh_db,molecular_db,plasma_db,total_db\n");
  std::ostringstream empty_b;
  emit_budget_report({}, empty_b);
  CHECK(empty_b.str().find('\n') == empty_b.str().size() - 1);

  BudgetRow r;
  r.link = "NRS";
  r.hop = "NRS";
  r.f_lo_hz = 209e9;
  r.f_hi_hz = 226e9;
  r.p_t_w = 10.0;
  r.losses.fspl_db = 194.0;
  r.losses.molecular_db = 20.5;
  r.losses.total_db = 214.5;
  r.p_r_dbm = -64.5;
  r.p_n_dbm = -71.7;
  r.capacity_bps = 44.9e9;
  r.spectral_efficiency = 2.64;
  std::ostringstream a, b;
  emit_budget_report({r}, a);
  emit_budget_report({r}, b);
  CHECK(a.str() == b.str());
  CHECK(contains(a.str(), "NRS,NRS,209-226,10.00,194.00,0.00,0.00,20.50,0.00,214.50,-64.50,-71.70,44.90,2.64,center\n"));

  std::ofstream bad;
  CHECK(error_code_of([&] { emit_loss_report({LossBreakdown{}}, bad); }) == ErrorCode::io);
}

TEST_CASE("checksums guard bundled data") {
  const fs::path orig = data_dir();
  const fs::path tmp = fs::temp_directory_path() / "thzsaga_checksum_test";
  fs::remove_all(tmp);
  fs::copy(orig, tmp, fs::copy_options::recursive);
  set_data_dir(tmp);
  CHECK_NOTHROW(read_file(tmp / "spectra/rain_land_2mm.csv"));
  {
    std::ofstream f(tmp / "spectra/rain_land_2mm.csv", std::ios::app);
    f << "3e-3,1\n";
  }
  CHECK(error_code_of([&] { read_file(tmp / "spectra/rain_land_2mm.csv"); }) == ErrorCode::checksum);
  CHECK(error_code_of([&] { read_file(tmp / "does_not_exist.csv"); }) == ErrorCode::io);
  set_data_dir(orig);
  fs::remove_all(tmp);
  CHECK(crc32_of("123456789") == 0xCBF43926u);
}

TEST_CASE("data directory resolution") {
  CHECK(fs::exists(data_dir() / "species.kv"));
  CHECK(resolve_ref("atmospheres/saturated.atm") == data_dir() / "atmospheres/saturated.atm");
  CHECK(error_code_of([] { resolve_ref("no/such/file.csv"); }) == ErrorCode::io);
}
