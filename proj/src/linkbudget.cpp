#include "thzsaga/linkbudget.hpp"

#include <algorithm>
#include <cmath>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"

namespace thz {

double noise_power_dbm(double B) {
  if (!(B > 0.0)) throw Error(ErrorCode::out_of_domain, "bandwidth must be positive", "noise_power");
  return constants::N0_dbm_per_hz + 10.0 * std::log10(B);
}

double received_power_dbm(double p_t_w, double gain_db, double loss_db) {
  if (!(p_t_w > 0.0)) throw Error(ErrorCode::out_of_domain, "transmit power must be positive", "received_power");
  return 10.0 * std::log10(p_t_w / 1e-3) - loss_db + gain_db;
}

double spectral_efficiency(double p_r_dbm, double p_n_dbm) {
  return std::log2(1.0 + std::pow(10.0, (p_r_dbm - p_n_dbm) / 10.0));
}

double capacity_bps(double B, double p_r_dbm, double p_n_dbm) {
  if (!(B > 0.0)) throw Error(ErrorCode::out_of_domain, "bandwidth must be positive", "capacity");
  return B * spectral_efficiency(p_r_dbm, p_n_dbm);
}

double hop_capacity(const HopBudgetInput& hop, double p_t_w) {
  if (p_t_w <= 0.0) return 0.0;
  return capacity_bps(hop.bandwidth_hz, received_power_dbm(p_t_w, hop.gain_db, hop.loss_db),
                      noise_power_dbm(hop.bandwidth_hz));
}

SplitResult equal_capacity_split(const HopBudgetInput& a, const HopBudgetInput& b, double P) {
  static const char* fn = "equal_capacity_split";
  if (!(P > 0.0)) throw Error(ErrorCode::validation, "total power must be positive", fn);
  if (hop_capacity(a, P) < kMinFeasibleCapacity_bps)
    throw Error(ErrorCode::no_solution, "first hop infeasible at full power", fn);
  if (hop_capacity(b, P) < kMinFeasibleCapacity_bps)
    throw Error(ErrorCode::no_solution, "second hop infeasible at full power", fn);

  SplitResult r;
  double lo = 0.0, hi = 1.0;
  for (int it = 1; it <= 200; ++it) {
    const double rho = 0.5 * (lo + hi);
    const double ca = hop_capacity(a, rho * P), cb = hop_capacity(b, (1.0 - rho) * P);
    r = {rho, rho * P, (1.0 - rho) * P, ca, cb, std::min(ca, cb), it};
    if (std::abs(ca - cb) <= kSplitRelTol * std::max(ca, cb)) return r;
    (ca < cb ? lo : hi) = rho;
  }
  throw Error(ErrorCode::convergence, "bisection did not equalise capacities", fn);
}

const char* to_string(Service s) {
  switch (s) {
    case Service::fixed_mobile: return "fixed_mobile";
    case Service::aeronautical_mobile: return "aeronautical_mobile";
    case Service::fss_earth_to_space: return "fss_earth_to_space";
    case Service::fss_space_to_earth: return "fss_space_to_earth";
    case Service::mss_earth_to_space: return "mss_earth_to_space";
    case Service::mss_space_to_earth: return "mss_space_to_earth";
  }
  return "?";
}

Service parse_service(const std::string& s) {
  for (std::size_t i = 0; i < kServiceCount; ++i)
    if (s == to_string(Service(i))) return Service(i);
  throw Error(ErrorCode::validation, "unknown service '" + s + "'", "service");
}

std::vector<BandAllocation> BandAllocationTable::bands_for_service(Service s) const {
  std::vector<BandAllocation> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [s](const BandAllocation& b) { return b.has(s); });
  return out;
}

AtmosphereModel apply_weather(const AtmosphereModel& base, const Weather& w) {
  AtmosphereModel m = base;
  if (w.humidity) m.humidity = *w.humidity;
  const RefractiveModel water = RefractiveModel::water(base.temperature.surface_K);
  if (w.rain_rate_mmhr > 0.0) {
    HydrometeorLayer rain{"rain", 0.0, w.rain_top_m, w.rain_spectrum.bins, water};
    const double scale = w.rain_spectrum.rain_rate_mmhr > 0.0 ? w.rain_rate_mmhr / w.rain_spectrum.rain_rate_mmhr : 1.0;
    for (auto& b : rain.bins) b.density_m3 *= scale;
    m.hydrometeors.push_back(rain);
  }
  if (w.cloud_top_m > 0.0) m.hydrometeors.push_back({"cloud", 0.0, w.cloud_top_m, w.cloud_spectrum.bins, water});
  return m;
}

PathGeometry HopSpec::path() const {
  switch (geometry) {
    case Geometry::elevation: return PathGeometry::slant(h0_m, h1_m, geometry_value);
    case Geometry::ground_distance: return PathGeometry::ground_distance(h0_m, h1_m, geometry_value);
    case Geometry::horizontal: return PathGeometry::horizontal_at(h0_m, geometry_value * 1e3);
  }
  return {};
}

const Weather* Scenario::find_weather(const std::string& name) const {
  for (const auto& w : weathers)
    if (w.name == name) return &w;
  return nullptr;
}

AtmosphereModel Scenario::atmosphere_for(const HopSpec& hop) const {
  if (hop.weather.empty()) return atmosphere;
  const Weather* w = find_weather(hop.weather);
  if (!w) throw Error(ErrorCode::validation, "unknown weather '" + hop.weather + "'", "hop " + hop.label);
  return apply_weather(atmosphere, *w);
}

BudgetRow make_budget_row(const std::string& link, const HopSpec& hop, double gain_db, double p_t_w,
                          const LossBreakdown& losses, double link_capacity_bps) {
  BudgetRow r;
  r.link = link;
  r.hop = hop.label;
  r.f_lo_hz = hop.f_lo_hz;
  r.f_hi_hz = hop.f_hi_hz;
  r.p_t_w = p_t_w;
  r.losses = losses;
  r.p_r_dbm = received_power_dbm(p_t_w, gain_db, losses.total_db);
  r.p_n_dbm = noise_power_dbm(hop.f_hi_hz - hop.f_lo_hz);
  r.spectral_efficiency = spectral_efficiency(r.p_r_dbm, r.p_n_dbm);
  r.capacity_bps = link_capacity_bps;
  return r;
}

std::vector<BudgetRow> evaluate_scenario(const Scenario& sc) {
  std::vector<BudgetRow> rows;
  for (const auto& link : sc.links) {
    if (link.hops.empty() || link.hops.size() > 2)
      throw Error(ErrorCode::validation, "a link needs one or two hops", "link " + link.label);
    std::vector<LossBreakdown> losses;
    std::vector<HopBudgetInput> inputs;
    for (const auto& hop : link.hops) {
      if (!(hop.f_lo_hz < hop.f_hi_hz))
        throw Error(ErrorCode::validation, "band needs lo < hi", "hop " + hop.label);
      const AtmosphereModel atm = sc.atmosphere_for(hop);
      const PathEvaluator eval(atm, hop.path());
      losses.push_back(band_average_loss(eval, hop.f_lo_hz, hop.f_hi_hz, sc.band_points));
      inputs.push_back({hop.f_hi_hz - hop.f_lo_hz, losses.back().total_db, hop.gain_db.value_or(sc.gain_db)});
    }
    if (link.hops.size() == 1) {
      const double c = hop_capacity(inputs[0], sc.p_total_w);
      rows.push_back(make_budget_row(link.label, link.hops[0], inputs[0].gain_db, sc.p_total_w, losses[0], c));
      continue;
    }
    SplitResult s;
    try {
      s = equal_capacity_split(inputs[0], inputs[1], sc.p_total_w);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), "link " + link.label);
    }
    rows.push_back(make_budget_row(link.label, link.hops[0], inputs[0].gain_db, s.p_a_w, losses[0], s.capacity_bps));
    rows.push_back(make_budget_row(link.label, link.hops[1], inputs[1].gain_db, s.p_b_w, losses[1], s.capacity_bps));
  }
  return rows;
}

}  // namespace thz
