#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thzsaga/atmosphere.hpp"
#include "thzsaga/path.hpp"

namespace thz {

inline constexpr double kDefaultGain_db = 110.0;
inline constexpr double kSplitRelTol = 1e-9;
// A hop below this capacity at full power cannot carry a relay.
inline constexpr double kMinFeasibleCapacity_bps = 1.0;

double noise_power_dbm(double bandwidth_hz);
double received_power_dbm(double p_t_w, double gain_db, double loss_db);
double capacity_bps(double bandwidth_hz, double p_r_dbm, double p_n_dbm);
double spectral_efficiency(double p_r_dbm, double p_n_dbm);

struct HopBudgetInput {
  double bandwidth_hz = 0.0;
  double loss_db = 0.0;
  double gain_db = kDefaultGain_db;
};

// Capacity with transmit power p_t_w >= 0 (0 W gives 0 bit/s).
double hop_capacity(const HopBudgetInput& hop, double p_t_w);

struct SplitResult {
  double rho = 0.0;
  double p_a_w = 0.0;
  double p_b_w = 0.0;
  double c_a_bps = 0.0;
  double c_b_bps = 0.0;
  double capacity_bps = 0.0;
  int iterations = 0;
};

SplitResult equal_capacity_split(const HopBudgetInput& a, const HopBudgetInput& b, double p_total_w);

enum class Service : std::size_t {
  fixed_mobile = 0,
  aeronautical_mobile,
  fss_earth_to_space,
  fss_space_to_earth,
  mss_earth_to_space,
  mss_space_to_earth,
};
inline constexpr std::size_t kServiceCount = 6;
const char* to_string(Service s);
Service parse_service(const std::string& s);

struct BandAllocation {
  double lo_ghz = 0.0;
  double hi_ghz = 0.0;
  std::array<bool, kServiceCount> flags{};
  bool has(Service s) const { return flags[std::size_t(s)]; }
};

struct BandAllocationTable {
  std::vector<BandAllocation> rows;
  std::vector<BandAllocation> bands_for_service(Service s) const;
};

struct Weather {
  std::string name;
  double rain_rate_mmhr = 0.0;
  double rain_top_m = 1000.0;
  std::string rain_spectrum_ref = "spectra/rain_land_2mm.csv";
  DropSpectrum rain_spectrum;
  double cloud_top_m = 0.0;
  std::string cloud_spectrum_ref = "spectra/cloud_cumulonimbus.csv";
  DropSpectrum cloud_spectrum;
  std::optional<HumidityMode> humidity;
};

// Rain bins are scaled by rain_rate / spectrum rate when the spectrum is
// labelled; the layers use the water model at the surface temperature.
AtmosphereModel apply_weather(const AtmosphereModel& base, const Weather& w);

struct HopSpec {
  enum class Geometry { elevation, ground_distance, horizontal };
  std::string label;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double h0_m = 0.0;
  double h1_m = 0.0;
  Geometry geometry = Geometry::elevation;
  double geometry_value = 0.0;  // rad, m, or km for horizontal
  std::optional<double> gain_db;
  std::string weather;

  PathGeometry path() const;
};

struct LinkSpec {
  std::string label;
  std::vector<HopSpec> hops;
};

struct Scenario {
  std::string name;
  std::string atmosphere_ref;
  AtmosphereModel atmosphere;
  double p_total_w = 10.0;
  double gain_db = kDefaultGain_db;
  int band_points = 1;
  std::vector<Weather> weathers;
  std::vector<LinkSpec> links;

  const Weather* find_weather(const std::string& name) const;
  AtmosphereModel atmosphere_for(const HopSpec& hop) const;
};

struct BudgetRow {
  std::string link;
  std::string hop;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double p_t_w = 0.0;
  LossBreakdown losses;
  double p_r_dbm = 0.0;
  double p_n_dbm = 0.0;
  double capacity_bps = 0.0;
  double spectral_efficiency = 0.0;
};

BudgetRow make_budget_row(const std::string& link, const HopSpec& hop, double gain_db, double p_t_w,
                          const LossBreakdown& losses, double link_capacity_bps);

std::vector<BudgetRow> evaluate_scenario(const Scenario& scenario);

}  // namespace thz
