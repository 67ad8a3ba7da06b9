#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "thzsaga/geometry.hpp"
#include "thzsaga/xsection.hpp"

namespace thz {

struct TemperatureProfile {
  double surface_K = 298.15;
  double lapse_K_per_m = 0.006;
  double tropopause_m = 1.0e4;
  double stratopause_m = 5.0e4;
  double upper_K = 2000.0;
};

double temperature(const TemperatureProfile& p, double h);

// exact: n0 (T/T0)^(m g/(k G) - 1), the integral of dp = -n m g dh with
// p = n k T over a linear lapse. printed: n0 exp{-(m g - k G) h / (k (T0 - G h))}.
enum class DensityForm { exact, printed };

double hydrostatic_density(double mass_kg, double n0, const TemperatureProfile& p, double h,
                           DensityForm form = DensityForm::exact);

inline constexpr double kWaterVaporCeiling_m = 15000.0;
inline constexpr double kWaterScaleHeight_m = 2000.0;

double saturated_water_density(const TemperatureProfile& p, double h, double multiplier = 1.0);
double unsaturated_water_density(double n0, double h);

enum class ProfileKind { hydrostatic, saturated_water, unsaturated_water, water_vapor, uniform };
enum class HumidityMode { saturated, unsaturated, dry };

const char* to_string(ProfileKind k);
const char* to_string(HumidityMode m);
ProfileKind parse_profile_kind(const std::string& s);
HumidityMode parse_humidity_mode(const std::string& s);

struct GasProfile {
  GasSpecies species;
  double n0 = 0.0;  // m^-3
  ProfileKind kind = ProfileKind::hydrostatic;
  double ceiling_m = 5.0e4;
};

struct DropBin {
  double diameter_m = 0.0;
  double density_m3 = 0.0;
};

struct DropSpectrum {
  std::vector<DropBin> bins;
  double rain_rate_mmhr = 0.0;  // 0 when unlabelled
};

struct HydrometeorLayer {
  std::string name;
  double h_lo = 0.0;
  double h_hi = 0.0;
  std::vector<DropBin> bins;
  RefractiveModel refractive = RefractiveModel::fixed({1.0, 0.0});
};

struct PlasmaLayer {
  std::string name;
  double h_lo = 0.0;
  double h_hi = 0.0;
  PlasmaState state;
};

struct AtmosphereModel {
  TemperatureProfile temperature;
  HumidityMode humidity = HumidityMode::saturated;
  double humidity_multiplier = 1.0;
  double unsaturated_n0 = 0.5 * 6.02214076e23;
  DensityForm density_form = DensityForm::exact;
  std::vector<GasProfile> gases;
  std::vector<HydrometeorLayer> hydrometeors;
  std::vector<PlasmaLayer> plasma;

  double gas_density(std::size_t i, double h) const;
  // Sorted, unique altitudes where some density or its slope changes.
  std::vector<double> breakpoints() const;
};

enum class SpeciesClass { gas, hydrometeor, electron };

struct SpeciesDensity {
  SpeciesClass cls;
  std::string name;
  std::size_t index = 0;  // gas, hydrometeor layer or plasma layer
  std::size_t bin = 0;    // hydrometeor bin
  double diameter_m = 0.0;
  double density_m3 = 0.0;
};

std::vector<SpeciesDensity> species_at(const AtmosphereModel& model, double h);

struct SpeciesSelector {
  SpeciesClass cls;
  std::size_t index = 0;
  std::size_t bin = 0;
};

inline constexpr double kColumnRelTol = 1e-8;

double column_density(const AtmosphereModel& model, const SpeciesSelector& sel, const PathGeometry& path);

// Integral of an arbitrary density profile between two altitudes, split at
// the given breakpoints. Upper limit may be +inf.
double integrate_profile(const std::function<double(double)>& n, double a, double b,
                         const std::vector<double>& breaks, const char* what);

}  // namespace thz
