#include "thzsaga/atmosphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"

namespace thz {

namespace {

using constants::g;
using constants::k_B;

void require_altitude(double h, const char* fn) {
  if (!(h >= 0.0)) throw Error(ErrorCode::out_of_domain, "altitude must be >= 0", fn);
}

bool inside(double h, double lo, double hi) { return h >= lo && h <= hi; }

double overlap(double a0, double a1, double b0, double b1) {
  const double lo = std::max(a0, b0), hi = std::min(a1, b1);
  return hi > lo ? hi - lo : 0.0;
}

}  // namespace

double temperature(const TemperatureProfile& p, double h) {
  require_altitude(h, "temperature");
  if (h <= p.tropopause_m) return p.surface_K - p.lapse_K_per_m * h;
  if (h <= p.stratopause_m) return p.surface_K - p.lapse_K_per_m * p.tropopause_m;
  return p.upper_K;
}

double hydrostatic_density(double m, double n0, const TemperatureProfile& p, double h, DensityForm form) {
  static const char* fn = "hydrostatic_density";
  require_altitude(h, fn);
  if (!(m > 0.0)) throw Error(ErrorCode::validation, "molecular mass must be positive", fn);
  const double T0 = p.surface_K, G = p.lapse_K_per_m;

  auto troposphere = [&](double z) {
    const double T = T0 - G * z;
    if (!(T > 0.0))
      throw Error(ErrorCode::model_domain, "non-positive temperature at h=" + std::to_string(z), fn);
    if (form == DensityForm::printed) return n0 * std::exp(-(m * g - k_B * G) * z / (k_B * T));
    if (G == 0.0) return n0 * std::exp(-m * g * z / (k_B * T0));
    return n0 * std::pow(T / T0, m * g / (k_B * G) - 1.0);
  };

  if (h <= p.tropopause_m) return troposphere(h);
  const double n_trop = troposphere(p.tropopause_m);
  const double T1 = T0 - G * p.tropopause_m;
  if (h <= p.stratopause_m) return n_trop * std::exp(-m * g * (h - p.tropopause_m) / (k_B * T1));
  const double n_strat = n_trop * std::exp(-m * g * (p.stratopause_m - p.tropopause_m) / (k_B * T1));
  // Pressure is continuous across the temperature jump.
  return n_strat * (T1 / p.upper_K) * std::exp(-m * g * (h - p.stratopause_m) / (k_B * p.upper_K));
}

double saturated_water_density(const TemperatureProfile& p, double h, double multiplier) {
  require_altitude(h, "saturated_water_density");
  if (h > kWaterVaporCeiling_m) return 0.0;
  const double T = temperature(p, h);
  if (!(T > 16.01))
    throw Error(ErrorCode::model_domain, "temperature below 16.01 K", "saturated_water_density");
  return multiplier * 550.09 / (k_B * T) * std::exp((19.843 - T / 234.5) * (T - 273.15) / (T - 16.01));
}

double unsaturated_water_density(double n0, double h) {
  require_altitude(h, "unsaturated_water_density");
  if (h > kWaterVaporCeiling_m) return 0.0;
  return n0 * std::exp(-h / kWaterScaleHeight_m);
}

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::hydrostatic: return "hydrostatic";
    case ProfileKind::saturated_water: return "saturated_water";
    case ProfileKind::unsaturated_water: return "unsaturated_water";
    case ProfileKind::water_vapor: return "water_vapor";
    case ProfileKind::uniform: return "uniform";
  }
  return "?";
}

const char* to_string(HumidityMode m) {
  switch (m) {
    case HumidityMode::saturated: return "saturated";
    case HumidityMode::unsaturated: return "unsaturated";
    case HumidityMode::dry: return "dry";
  }
  return "?";
}

ProfileKind parse_profile_kind(const std::string& s) {
  for (auto k : {ProfileKind::hydrostatic, ProfileKind::saturated_water, ProfileKind::unsaturated_water,
                 ProfileKind::water_vapor, ProfileKind::uniform})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::validation, "unknown profile kind '" + s + "'", "profile");
}

HumidityMode parse_humidity_mode(const std::string& s) {
  for (auto m : {HumidityMode::saturated, HumidityMode::unsaturated, HumidityMode::dry})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::validation, "unknown humidity mode '" + s + "'", "humidity_mode");
}

double AtmosphereModel::gas_density(std::size_t i, double h) const {
  const GasProfile& gp = gases.at(i);
  if (h > gp.ceiling_m) return 0.0;
  switch (gp.kind) {
    case ProfileKind::hydrostatic:
      return hydrostatic_density(gp.species.mass_kg, gp.n0, temperature, h, density_form);
    case ProfileKind::saturated_water: return saturated_water_density(temperature, h, humidity_multiplier);
    case ProfileKind::unsaturated_water: return unsaturated_water_density(gp.n0, h);
    case ProfileKind::uniform: return gp.n0;
    case ProfileKind::water_vapor:
      switch (humidity) {
        case HumidityMode::saturated: return saturated_water_density(temperature, h, humidity_multiplier);
        case HumidityMode::unsaturated: return unsaturated_water_density(unsaturated_n0, h);
        case HumidityMode::dry: return 0.0;
      }
  }
  return 0.0;
}

std::vector<double> AtmosphereModel::breakpoints() const {
  std::vector<double> b{0.0, temperature.tropopause_m, temperature.stratopause_m, kWaterVaporCeiling_m};
  for (const auto& gp : gases)
    if (std::isfinite(gp.ceiling_m)) b.push_back(gp.ceiling_m);
  for (const auto& l : hydrometeors) b.insert(b.end(), {l.h_lo, l.h_hi});
  for (const auto& l : plasma) {
    b.push_back(l.h_lo);
    if (std::isfinite(l.h_hi)) b.push_back(l.h_hi);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<SpeciesDensity> species_at(const AtmosphereModel& model, double h) {
  require_altitude(h, "species_at");
  std::vector<SpeciesDensity> out;
  for (std::size_t i = 0; i < model.gases.size(); ++i) {
    const double n = model.gas_density(i, h);
    if (n > 0.0) out.push_back({SpeciesClass::gas, model.gases[i].species.name, i, 0, 0.0, n});
  }
  for (std::size_t i = 0; i < model.hydrometeors.size(); ++i) {
    const auto& l = model.hydrometeors[i];
    if (!inside(h, l.h_lo, l.h_hi)) continue;
    for (std::size_t b = 0; b < l.bins.size(); ++b)
      if (l.bins[b].density_m3 > 0.0)
        out.push_back({SpeciesClass::hydrometeor, l.name, i, b, l.bins[b].diameter_m, l.bins[b].density_m3});
  }
  for (std::size_t i = 0; i < model.plasma.size(); ++i) {
    const auto& l = model.plasma[i];
    if (inside(h, l.h_lo, l.h_hi) && l.state.n_e > 0.0)
      out.push_back({SpeciesClass::electron, l.name, i, 0, 0.0, l.state.n_e});
  }
  return out;
}

double integrate_profile(const std::function<double(double)>& n, double a, double b,
                         const std::vector<double>& breaks, const char* what) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(b > a)) return 0.0;
  std::vector<double> edges{a};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);

  double total = 0.0, err_total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0, l1 = 0.0;
    const double piece =
        gauss_kronrod<double, 15>::integrate(n, edges[i], edges[i + 1], 20, kColumnRelTol * 1e-2, &err, &l1);
    total += piece;
    err_total += err;
  }
  if (!std::isfinite(total) || err_total > kColumnRelTol * std::abs(total) + 1e-300) {
    std::ostringstream os;
    os << "quadrature over [" << a << ", " << b << "] m did not reach 1e-8 (estimate " << total << ", error "
       << err_total << ", " << edges.size() - 1 << " pieces)";
    throw Error(ErrorCode::numerical, os.str(), what);
  }
  return total;
}

double column_density(const AtmosphereModel& model, const SpeciesSelector& sel, const PathGeometry& path) {
  const double lo = path.h_lo(), hi = path.h_hi();
  const double inv_sin = path.horizontal ? 0.0 : 1.0 / std::sin(path.elevation);

  auto uniform_layer = [&](double l_lo, double l_hi, double n) {
    if (n == 0.0) return 0.0;
    if (path.horizontal) return inside(path.h0, l_lo, l_hi) ? n * path.length : 0.0;
    return n * overlap(lo, hi, l_lo, l_hi) * inv_sin;
  };

  switch (sel.cls) {
    case SpeciesClass::hydrometeor: {
      const auto& l = model.hydrometeors.at(sel.index);
      return uniform_layer(l.h_lo, l.h_hi, l.bins.at(sel.bin).density_m3);
    }
    case SpeciesClass::electron: {
      const auto& l = model.plasma.at(sel.index);
      return uniform_layer(l.h_lo, l.h_hi, l.state.n_e);
    }
    case SpeciesClass::gas: {
      if (path.horizontal) return model.gas_density(sel.index, path.h0) * path.length;
      const double ceiling = model.gases.at(sel.index).ceiling_m;
      const double top = std::min(hi, ceiling);
      auto n = [&](double h) { return model.gas_density(sel.index, h); };
      const std::string what = "column_density(" + model.gases[sel.index].species.name + ")";
      return integrate_profile(n, lo, top, model.breakpoints(), what.c_str()) * inv_sin;
    }
  }
  return 0.0;
}

}  // namespace thz
