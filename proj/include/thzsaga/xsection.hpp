#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thzsaga/specfun.hpp"

namespace thz {

struct CrossSections {
  double absorption = 0.0;  // m^2
  double scattering = 0.0;  // m^2
  double total() const { return absorption + scattering; }
};

// Double-Debye permittivity of liquid water. Each parameter is a polynomial
// in the temperature variable: t = T - 273.15 (celsius) or t = 300/T - 1
// (inverse_theta). Relaxation frequencies are in Hz.
struct DoubleDebyeParams {
  enum class TempVariable { celsius, inverse_theta };
  std::string version;
  TempVariable variable = TempVariable::inverse_theta;
  std::vector<double> eps_s, eps_1, eps_inf, fD1_hz, fD2_hz;
  double f_min_hz = 1e11, f_max_hz = 1e12;
  double T_min_K = 273.0, T_max_K = 373.0;

  double temperature_variable(double T) const;
  cplx permittivity(double f_hz, double T) const;
};

cplx water_refractive_index(double f_hz, double T, const DoubleDebyeParams& params);
// Uses the bundled parameter file.
cplx water_refractive_index(double f_hz, double T);

class RefractiveModel {
 public:
  static RefractiveModel fixed(cplx q, double mu1 = 1.0);
  static RefractiveModel water(double T, double mu1 = 1.0);
  static RefractiveModel water(double T, std::shared_ptr<const DoubleDebyeParams> params, double mu1 = 1.0);

  cplx q_at(double f_hz) const;
  double mu1() const { return mu1_; }
  bool is_water() const { return water_; }
  double water_temperature() const { return T_; }
  cplx fixed_q() const { return q_; }

 private:
  bool water_ = false;
  cplx q_{1.0, 0.0};
  double T_ = 0.0;
  double mu1_ = 1.0;
  std::shared_ptr<const DoubleDebyeParams> params_;
};

// m_max = ceil(xi + 4 xi^(1/3) + 2)
int mie_truncation_order(double xi);

// m_max <= 0 selects the standard truncation order. The series is also
// summed to m_max + 10 and must agree to 1e-9 relative.
CrossSections mie_cross_sections(double d, double lambda, cplx q, double mu1 = 1.0, int m_max = 0);
CrossSections mie_cross_sections(double d, double lambda, const RefractiveModel& model);

CrossSections rayleigh_cross_sections(double d, double lambda, cplx q);

enum class Regime { rayleigh, mie };
const char* to_string(Regime r);

inline constexpr double kDefaultRayleighFraction = 0.1;

Regime select_regime(double d, double lambda, double rayleigh_fraction = kDefaultRayleighFraction);

struct DispatchedCrossSections {
  CrossSections xs;
  Regime regime;
};

DispatchedCrossSections auto_cross_sections(double d, double lambda, const RefractiveModel& model,
                                            double rayleigh_fraction = kDefaultRayleighFraction);

double molecular_scattering_xs(double lambda, double alpha);

struct AbsorptionTable {
  std::string species;
  std::string provenance;
  std::vector<double> f_hz;
  std::vector<double> sigma_m2;

  double f_min() const { return f_hz.front(); }
  double f_max() const { return f_hz.back(); }
  // Log-linear in sigma; linear when a bracketing node is zero.
  double interpolate(double f) const;
};

struct GasSpecies {
  std::string name;
  double mass_kg = 0.0;
  double polarizability_m3 = 0.0;
  std::shared_ptr<const AbsorptionTable> table;
  // A mixture lists its constituents with mole fractions instead of a table.
  std::vector<std::pair<double, std::shared_ptr<const GasSpecies>>> components;

  bool is_mixture() const { return !components.empty(); }
};

double molecular_absorption_xs(const GasSpecies& species, double f_hz);
// Fraction-weighted for mixtures.
double molecular_scattering_xs(const GasSpecies& species, double lambda);

struct PlasmaState {
  double n_e = 0.0;  // m^-3
  double T = 0.0;    // K
};

double plasma_frequency(double n_e);
double gaunt_log(double T, double f_hz);
double coulomb_absorption_xs(double f_hz, const PlasmaState& plasma);
double thomson_scattering_xs();

}  // namespace thz
