#include <doctest.h>

#include <cmath>
#include <memory>

#include "helpers.hpp"
#include "oracle_values.hpp"
#include "thzsaga/constants.hpp"
#include "thzsaga/data_io.hpp"
#include "thzsaga/xsection.hpp"

using namespace thz;
using testing::error_code_of;
using testing::rel;

namespace {
double lam(double f) { return constants::c / f; }
}  // namespace

TEST_CASE("water refractive index") {
  CHECK(rel(water_refractive_index(0.3e12, 298.15), oracle::water_q_0p3thz) < 1e-13);
  CHECK(rel(water_refractive_index(1e12, 280.0), oracle::water_q_1thz_280) < 1e-13);
  double prev = 1e9;
  for (double f = 0.1e12; f <= 1e12 + 1; f += 0.05e12) {
    const cplx q = water_refractive_index(f, 298.0);
    CHECK(q.imag() > 0.0);
    CHECK(std::abs(q) < prev);
    prev = std::abs(q);
  }
  for (double T : {274.0, 300.0, 350.0, 372.0}) CHECK(water_refractive_index(0.5e12, T).imag() > 0.0);
  CHECK(error_code_of([] { water_refractive_index(0.05e12, 298.15); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { water_refractive_index(2e12, 298.15); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { water_refractive_index(0.3e12, 260.0); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { water_refractive_index(0.3e12, 380.0); }) == ErrorCode::out_of_domain);
}

TEST_CASE("Mie against brute-force oracle") {
  const auto water = RefractiveModel::water(298.15);
  struct Row {
    double d, f, a, s;
  } rows[] = {
      {1e-4, 0.3e12, oracle::mie_d0p1mm_0p3thz_abs, oracle::mie_d0p1mm_0p3thz_sca},
      {2e-3, 0.1e12, oracle::mie_d2mm_0p1thz_abs, oracle::mie_d2mm_0p1thz_sca},
      {2e-3, 1e12, oracle::mie_d2mm_1thz_abs, oracle::mie_d2mm_1thz_sca},
      {2e-3, 132e9, oracle::mie_d2mm_132ghz_abs, oracle::mie_d2mm_132ghz_sca},
  };
  for (const auto& r : rows) {
    const CrossSections xs = mie_cross_sections(r.d, lam(r.f), water);
    CHECK(rel(xs.absorption, r.a) < 1e-8);
    CHECK(rel(xs.scattering, r.s) < 1e-8);
  }
}

TEST_CASE("Mie 2 mm water drops: order 1e-6 m^2 and sigma_S > sigma_A") {
  const auto water = RefractiveModel::water(298.15);
  for (double f = 0.1e12; f <= 1e12 + 1; f += 0.05e12) {
    const CrossSections xs = mie_cross_sections(2e-3, lam(f), water);
    CHECK(xs.absorption > 1e-6);
    CHECK(xs.absorption < 1e-5);
    CHECK(xs.scattering > 1e-6);
    CHECK(xs.scattering < 1e-5);
    CHECK(xs.scattering > xs.absorption);
  }
}

TEST_CASE("Mie index-matched sphere is invisible") {
  for (double d : {1e-5, 1e-3, 5e-3}) {
    const CrossSections xs = mie_cross_sections(d, lam(0.3e12), cplx(1.0, 0.0));
    CHECK(std::abs(xs.absorption) < 1e-30);
    CHECK(std::abs(xs.scattering) < 1e-30);
  }
}

TEST_CASE("Mie lossless sphere has no absorption and results are non-negative") {
  const CrossSections xs = mie_cross_sections(1e-3, lam(0.5e12), cplx(1.33, 0.0));
  CHECK(xs.scattering > 0.0);
  CHECK(xs.absorption <= 1e-12 * xs.scattering);
}

TEST_CASE("Mie truncation stability") {
  const cplx q{2.2, 0.6};
  for (double xi : {0.5, 3.0, 12.0, 30.0, 50.0}) {
    const double l = 1e-3, d = xi * l / constants::pi;
    const int m = mie_truncation_order(xi);
    CHECK(m >= xi + 4 * std::cbrt(xi) + 2);
    const CrossSections a = mie_cross_sections(d, l, q, 1.0, m);
    const CrossSections b = mie_cross_sections(d, l, q, 1.0, int(std::ceil(1.5 * m)));
    CHECK(rel(a.absorption, b.absorption) < 1e-9);
    CHECK(rel(a.scattering, b.scattering) < 1e-9);
  }
}

TEST_CASE("Mie argument validation") {
  CHECK(error_code_of([] { mie_cross_sections(0.0, 1e-3, cplx(1.5, 0.1)); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { mie_cross_sections(1e-3, -1.0, cplx(1.5, 0.1)); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { mie_cross_sections(1e-3, 1e-3, cplx(1.5, -0.1)); }) == ErrorCode::out_of_domain);
  CHECK(error_code_of([] { RefractiveModel::fixed(cplx(1.5, 0.0), 0.0); }) == ErrorCode::validation);
}

TEST_CASE("Rayleigh cross sections") {
  const double f = 0.5e12;
  const cplx q = water_refractive_index(f, 298.15);
  const CrossSections xs = rayleigh_cross_sections(2e-5, lam(f), q);
  CHECK(rel(xs.absorption, oracle::rayleigh_d20um_0p5thz_abs) < 1e-12);
  CHECK(rel(xs.scattering, oracle::rayleigh_d20um_0p5thz_sca) < 1e-12);

  CHECK(rayleigh_cross_sections(1e-5, 1e-3, cplx(1.5, 0.0)).absorption == 0.0);
  for (double fi = 0.1e12; fi <= 1e12 + 1; fi += 0.1e12) {
    const CrossSections r = rayleigh_cross_sections(2e-5, lam(fi), water_refractive_index(fi, 298.15));
    CHECK(r.scattering < 0.05 * r.absorption);
  }
  CHECK(error_code_of([] { rayleigh_cross_sections(1e-5, 1e-3, std::sqrt(cplx(-2.0, 0.0))); }) ==
        ErrorCode::singularity);
}

TEST_CASE("Mie to Rayleigh limit tightens with size parameter") {
  double prev_a = 1e9, prev_s = 1e9;
  for (double xi : {0.01, 0.005, 0.001}) {
    double worst_a = 0.0, worst_s = 0.0;
    for (double f = 0.1e12; f <= 1e12 + 1; f += 0.1e12) {
      const double l = lam(f), d = xi * l / constants::pi;
      const cplx q = water_refractive_index(f, 298.15);
      const CrossSections m = mie_cross_sections(d, l, q);
      const CrossSections r = rayleigh_cross_sections(d, l, q);
      worst_a = std::max(worst_a, rel(r.absorption, m.absorption));
      worst_s = std::max(worst_s, rel(r.scattering, m.scattering));
    }
    CHECK(worst_a < 0.01);
    CHECK(worst_s < 0.05);
    CHECK(worst_a < prev_a);
    CHECK(worst_s < prev_s);
    prev_a = worst_a;
    prev_s = worst_s;
  }
}

TEST_CASE("regime dispatch") {
  const auto water = RefractiveModel::water(298.15);
  const double l = lam(0.1e12);
  CHECK(auto_cross_sections(l / 20, l, water).regime == Regime::rayleigh);
  CHECK(auto_cross_sections(l, l, water).regime == Regime::mie);
  CHECK(select_regime(l / 10, l) == Regime::mie);
  CHECK(select_regime(l / 5, l, 0.5) == Regime::rayleigh);

  const double d = l / 10;
  const cplx q = water.q_at(0.1e12);
  const CrossSections m = mie_cross_sections(d, l, q);
  const CrossSections r = rayleigh_cross_sections(d, l, q);
  // Seam jump at d = lambda/10 is largest at 0.1 THz where |q| is largest.
  CHECK(rel(r.total(), m.total()) < 0.35);
  CHECK(r.total() < m.total());
}

TEST_CASE("molecular scattering") {
  CHECK(molecular_scattering_xs(1e-3, 0.0) == 0.0);
  CHECK(rel(molecular_scattering_xs(lam(1e12), 1e-30), oracle::molscat_1e30_1thz) < 1e-13);
  CHECK(rel(molecular_scattering_xs(lam(1e12), 2e-30), 4 * molecular_scattering_xs(lam(1e12), 1e-30)) < 1e-14);
  CHECK(error_code_of([] { molecular_scattering_xs(1e-3, -1.0); }) == ErrorCode::out_of_domain);
}

TEST_CASE("absorption table interpolation") {
  auto t = std::make_shared<AbsorptionTable>();
  t->species = "x";
  t->f_hz = {1e11, 2e11, 3e11, 4e11};
  t->sigma_m2 = {1e-26, 2e-26, 0.0, 4e-26};
  CHECK(t->interpolate(2e11) == 2e-26);
  CHECK(rel(t->interpolate(1.5e11), std::sqrt(1e-26 * 2e-26)) < 1e-12);
  CHECK(rel(t->interpolate(2.5e11), 1e-26) < 1e-12);  // linear through a zero node
  CHECK(error_code_of([&] { t->interpolate(0.5e11); }) == ErrorCode::out_of_range);
  CHECK(error_code_of([&] { t->interpolate(5e11); }) == ErrorCode::out_of_range);

  GasSpecies gas{"x", 1e-26, 1e-30, t, {}};
  CHECK(molecular_absorption_xs(gas, 4e11) == 4e-26);
}

TEST_CASE("dry air is the mole-fraction-weighted sum of its components") {
  const auto& cat = default_species_catalog();
  const GasSpecies& air = *cat.at("dry_air");
  REQUIRE(air.is_mixture());
  for (double f : {100e9, 118.75e9, 217.5e9, 424.7e9, 1000e9}) {
    const double expect = 0.78084 * molecular_absorption_xs(*cat.at("n2"), f) +
                          0.20948 * molecular_absorption_xs(*cat.at("o2"), f) +
                          0.00935 * molecular_absorption_xs(*cat.at("ar"), f) +
                          0.00033 * molecular_absorption_xs(*cat.at("co2"), f);
    CHECK(rel(molecular_absorption_xs(air, f), expect) < 1e-14);
  }
  const GasSpecies& h2o = *cat.at("h2o");
  CHECK(h2o.table->f_min() <= 1e11);
  CHECK(h2o.table->f_max() >= 1e12);
}

TEST_CASE("plasma frequency and Gaunt factor") {
  CHECK(plasma_frequency(0.0) == 0.0);
  CHECK(rel(plasma_frequency(1e11), oracle::fpe_1e11) < 1e-12);
  CHECK(std::abs(plasma_frequency(1e11) - 2.84e6) < 0.01e6);
  CHECK(rel(plasma_frequency(4e11), 2 * plasma_frequency(1e11)) < 1e-14);

  CHECK(std::abs(gaunt_log(2000.0, 1e12) - 22.07) < 0.01);
  CHECK(std::abs(gaunt_log(1e6, 1e12) - 31.48) < 0.01);
  const double T = 9.1e5, f = 1e12;
  const double lower = 38.3 + 1.5 * std::log(T) - std::log(f);
  const double upper = 45.3 + std::log(T) - std::log(f);
  CHECK(gaunt_log(T, f) == doctest::Approx(lower).epsilon(1e-14));
  CHECK(std::abs(lower - upper) < 0.3);
  CHECK(error_code_of([] { gaunt_log(1.0, 1e20); }) == ErrorCode::degenerate_plasma);
}

TEST_CASE("Coulomb absorption") {
  const PlasmaState iono{1e11, 2000.0};
  CHECK(rel(coulomb_absorption_xs(0.1e12, iono), oracle::coulomb_1e11_2000_0p1thz) < 1e-10);
  CHECK(rel(coulomb_absorption_xs(0.3e12, iono), oracle::coulomb_1e11_2000_0p3thz) < 1e-10);
  double prev = 1e300;
  for (double f = 0.1e12; f <= 1e12 + 1; f += 0.1e12) {
    const double s = coulomb_absorption_xs(f, iono);
    CHECK(s < prev);
    prev = s;
  }
  CHECK(coulomb_absorption_xs(0.3e12, {1e-3, 2000.0}) < 1e-40);
  const double r = coulomb_absorption_xs(1e12, {2e11, 2000.0}) / coulomb_absorption_xs(1e12, iono);
  CHECK(std::abs(r - 2.0) < 1e-9);
  CHECK(error_code_of([&] { coulomb_absorption_xs(1e6, iono); }) == ErrorCode::evanescent);
  CHECK(error_code_of([&] { coulomb_absorption_xs(plasma_frequency(1e11), iono); }) == ErrorCode::evanescent);
}

TEST_CASE("Thomson scattering") {
  CHECK(std::abs(thomson_scattering_xs() - 6.6524e-29) < 1e-32);
  CHECK(rel(thomson_scattering_xs(), oracle::thomson) < 1e-12);
  const double r_e = constants::q_e * constants::q_e /
                     (4 * constants::pi * constants::eps0 * constants::m_e * constants::c * constants::c);
  CHECK(rel(thomson_scattering_xs(), 8 * constants::pi / 3 * r_e * r_e) < 1e-14);
}
