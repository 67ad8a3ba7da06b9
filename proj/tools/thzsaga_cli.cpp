// thzsaga: cross sections, density profiles, path loss, link budgets.
//
// Exit status: 0 success, 1 computation error, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "thzsaga/constants.hpp"
#include "thzsaga/data_io.hpp"
#include "thzsaga/error.hpp"
#include "thzsaga/kernels.hpp"

namespace {

using namespace thz;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;

std::vector<double> split_numbers(const std::string& s, char sep, std::size_t n, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      v.push_back(parse_double(item, flag));
    } catch (const Error&) {
      throw UsageError(flag + ": not a number '" + item + "'");
    }
  }
  if (v.size() != n) throw UsageError(flag + ": expected " + std::to_string(n) + " values in '" + s + "'");
  return v;
}

struct Grid {
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

Grid parse_grid(const std::string& s, const std::string& flag) {
  const auto v = split_numbers(s, ':', 3, flag);
  if (v[2] < 1 || v[2] != std::floor(v[2])) throw UsageError(flag + ": count must be a positive integer");
  if (v[1] < v[0]) throw UsageError(flag + ": needs lo <= hi");
  return {v[0], v[1], int(v[2])};
}

std::vector<double> altitude_grid(const Grid& g) {
  if (g.lo < 0.0) throw UsageError("--h: altitudes must be >= 0");
  std::vector<double> h;
  for (int i = 0; i < g.count; ++i) h.push_back(g.count == 1 ? g.lo : g.lo + (g.hi - g.lo) * i / (g.count - 1));
  if (g.count > 1) h.back() = g.hi;
  return h;
}

std::vector<double> freq_grid(const std::string& s) {
  const Grid g = parse_grid(s, "--f");
  if (!(g.lo > 0.0)) throw UsageError("--f: frequencies must be positive");
  return frequency_grid(g.lo, g.hi, g.count);
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << v;
  return os.str();
}

void require_file(const std::string& p) {
  if (!fs::exists(p)) throw UsageError("no such file: " + p);
}

// Input loading failures are usage errors.
template <class F>
auto load_input(F f) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct Common {
  std::string data_dir;
  std::string out;
  bool scientific = false;
  int threads = 0;
};

void write_output(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::io, "stdout write failure");
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open output", c.out);
  f << text;
  if (!f) throw Error(ErrorCode::io, "write failure", c.out);
}

// ---------------------------------------------------------------- xsec

struct XsecArgs {
  double water_d = 0.0, sphere_d = 0.0;
  std::string q;
  double temperature = 298.15;
  std::string gas;
  bool electron = false;
  double ne = 1e11, te = 2000.0;
  std::string f;
  std::string regime = "auto";
  double rayleigh_fraction = kDefaultRayleighFraction;
};

std::string run_xsec(const Common& c, const XsecArgs& a) {
  const int kinds = int(a.water_d > 0) + int(a.sphere_d > 0) + int(!a.gas.empty()) + int(a.electron);
  if (kinds != 1) throw UsageError("give exactly one of --water-drop-d, --sphere-d, --gas, --electron");
  if (a.sphere_d > 0 && a.q.empty()) throw UsageError("--sphere-d needs --q re,im");
  const auto f = freq_grid(a.f);
  std::ostringstream os;
  os << "f_hz,sigma_a_m2,sigma_s_m2,mechanism\n";

  if (a.water_d > 0 || a.sphere_d > 0) {
    const double d = a.water_d > 0 ? a.water_d : a.sphere_d;
    RefractiveModel model = load_input([&] {
      if (a.water_d > 0) return RefractiveModel::water(a.temperature);
      const auto v = split_numbers(a.q, ',', 2, "--q");
      return RefractiveModel::fixed({v[0], v[1]});
    });
    std::vector<DispatchedCrossSections> rows;
    if (a.regime == "auto") {
      rows = sweep_drop_omp(d, model, f, a.rayleigh_fraction, c.threads);
    } else {
      for (double fi : f) {
        const double lambda = constants::c / fi;
        if (a.regime == "mie")
          rows.push_back({mie_cross_sections(d, lambda, model), Regime::mie});
        else
          rows.push_back({rayleigh_cross_sections(d, lambda, model.q_at(fi)), Regime::rayleigh});
      }
    }
    for (std::size_t i = 0; i < f.size(); ++i)
      os << sci(f[i]) << "," << sci(rows[i].xs.absorption) << "," << sci(rows[i].xs.scattering) << ","
         << to_string(rows[i].regime) << "\n";
  } else if (!a.gas.empty()) {
    const auto& cat = load_input([&]() -> const SpeciesCatalog& { return default_species_catalog(); });
    auto it = cat.find(a.gas);
    if (it == cat.end()) throw UsageError("unknown gas '" + a.gas + "'");
    for (double fi : f)
      os << sci(fi) << "," << sci(molecular_absorption_xs(*it->second, fi)) << ","
         << sci(molecular_scattering_xs(*it->second, constants::c / fi)) << ",molecular\n";
  } else {
    if (a.ne <= 0 || a.te <= 0) throw UsageError("--ne and --te must be positive");
    for (double fi : f)
      os << sci(fi) << "," << sci(coulomb_absorption_xs(fi, {a.ne, a.te})) << "," << sci(thomson_scattering_xs())
         << ",plasma\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- profile

std::string run_profile(const std::string& atm_path, const std::string& h_grid) {
  require_file(atm_path);
  const AtmosphereModel m = load_input([&] { return load_atmosphere_file(atm_path); });
  const auto hs = altitude_grid(parse_grid(h_grid, "--h"));
  std::ostringstream os;
  os << "h_m,temperature_K,species,density_m3\n";
  for (double h : hs) {
    const std::string T = sci(temperature(m.temperature, h));
    for (std::size_t i = 0; i < m.gases.size(); ++i)
      os << sci(h) << "," << T << "," << m.gases[i].species.name << "," << sci(m.gas_density(i, h)) << "\n";
    for (const auto& s : species_at(m, h)) {
      if (s.cls == SpeciesClass::gas) continue;
      std::string name = s.name;
      if (s.cls == SpeciesClass::hydrometeor) name += "[d=" + format_double(s.diameter_m) + "]";
      os << sci(h) << "," << T << "," << name << "," << sci(s.density_m3) << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- loss

struct PathArgs {
  std::string vertical, horizontal, ground;
  double theta = constants::pi / 2;
};

PathGeometry build_path(const PathArgs& p) {
  const int kinds = int(!p.vertical.empty()) + int(!p.horizontal.empty()) + int(!p.ground.empty());
  if (kinds != 1) throw UsageError("give exactly one of --vertical, --horizontal, --ground-distance");
  try {
    if (!p.vertical.empty()) {
      const auto v = split_numbers(p.vertical, ':', 2, "--vertical");
      return PathGeometry::slant(v[0], v[1], p.theta);
    }
    if (!p.horizontal.empty()) {
      const auto v = split_numbers(p.horizontal, ':', 2, "--horizontal");
      return PathGeometry::horizontal_at(v[0], v[1]);
    }
    const auto v = split_numbers(p.ground, ':', 3, "--ground-distance");
    return PathGeometry::ground_distance(v[0], v[1], v[2]);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct WeatherArgs {
  double rain_rate = 0.0, rain_top = 1000.0, cloud_top = 0.0;
  std::string rain_spectrum = "spectra/rain_land_2mm.csv";
  std::string cloud_spectrum = "spectra/cloud_cumulonimbus.csv";
};

AtmosphereModel with_weather(const AtmosphereModel& m, const WeatherArgs& w) {
  if (w.rain_rate <= 0.0 && w.cloud_top <= 0.0) return m;
  Weather wx;
  wx.name = "cli";
  wx.rain_rate_mmhr = w.rain_rate;
  wx.rain_top_m = w.rain_top;
  wx.cloud_top_m = w.cloud_top;
  return load_input([&] {
    if (w.rain_rate > 0.0) {
      const auto p = resolve_ref(w.rain_spectrum);
      wx.rain_spectrum = load_drop_spectrum(read_file(p), p.string());
    }
    if (w.cloud_top > 0.0) {
      const auto p = resolve_ref(w.cloud_spectrum);
      wx.cloud_spectrum = load_drop_spectrum(read_file(p), p.string());
    }
    return apply_weather(m, wx);
  });
}

struct LossArgs {
  std::string atm;
  PathArgs path;
  WeatherArgs weather;
  std::string f;
  std::string band;
  int band_points = 1;
  double rayleigh_fraction = kDefaultRayleighFraction;
};

std::string run_loss(const Common& c, const LossArgs& a) {
  require_file(a.atm);
  const AtmosphereModel base = load_input([&] { return load_atmosphere_file(a.atm); });
  const AtmosphereModel m = with_weather(base, a.weather);
  const PathGeometry path = build_path(a.path);
  if (a.f.empty() == a.band.empty()) throw UsageError("give exactly one of --f or --band-ghz");
  std::vector<double> f;
  std::vector<double> band;
  if (!a.f.empty())
    f = freq_grid(a.f);
  else
    band = split_numbers(a.band, ',', 2, "--band-ghz");
  if (a.band_points < 1) throw UsageError("--band-points must be >= 1");

  const PathEvaluator eval(m, path, LossOptions{a.rayleigh_fraction});
  std::ostringstream os;
  if (!band.empty()) {
    if (!(band[0] > 0 && band[0] < band[1])) throw UsageError("--band-ghz needs 0 < lo < hi");
    const LossBreakdown r = band_average_loss(eval, band[0] * 1e9, band[1] * 1e9, a.band_points);
    os << "# method=" << r.method << "\n";
    emit_loss_report({r}, os, {c.scientific});
  } else {
    emit_loss_report(sweep_loss_omp(eval, f, c.threads), os, {c.scientific});
  }
  return os.str();
}

// ---------------------------------------------------------------- budget / sweep

Scenario load_scenario_arg(const std::string& path) {
  require_file(path);
  return load_input([&] { return load_scenario_file(path); });
}

std::string run_budget(const Common& c, const std::string& scenario, int band_points) {
  Scenario sc = load_scenario_arg(scenario);
  if (band_points > 0) sc.band_points = band_points;
  std::ostringstream os;
  emit_budget_report(evaluate_scenario(sc), os, {c.scientific});
  return os.str();
}

std::string run_sweep(const Common& c, const std::string& scenario, const std::string& grid) {
  const Scenario sc = load_scenario_arg(scenario);
  const auto f = freq_grid(grid);
  std::ostringstream os;
  for (const auto& link : sc.links)
    for (const auto& hop : link.hops) {
      const AtmosphereModel atm = sc.atmosphere_for(hop);
      const PathGeometry path = hop.path();
      const PathEvaluator eval(atm, path);
      os << "# scenario=" << sc.name << " link=" << link.label << " hop=" << hop.label << " path=" << path.describe()
         << "\n";
      emit_loss_report(sweep_loss_omp(eval, f, c.threads), os, {c.scientific});
    }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"THz space-air-ground propagation loss and link budget"};
  app.require_subcommand(1, 1);
  Common common;
  app.add_option("--data-dir", common.data_dir, "Bundled data directory (overrides THZ_SAGA_DATA)");
  app.add_option("-o,--out", common.out, "Write output to this file");
  app.add_flag("--scientific", common.scientific, "Print losses in scientific notation");
  app.add_option("--threads", common.threads, "OpenMP threads (0 = default)");

  XsecArgs xa;
  auto* xsec = app.add_subcommand("xsec", "Cross sections over a frequency grid");
  xsec->add_option("--water-drop-d", xa.water_d, "Water drop diameter (m)");
  xsec->add_option("--sphere-d", xa.sphere_d, "Sphere diameter (m), with --q");
  xsec->add_option("--q", xa.q, "Fixed refractive index re,im");
  xsec->add_option("--temperature-K", xa.temperature, "Water temperature (K)");
  xsec->add_option("--gas", xa.gas, "Gas species name");
  xsec->add_flag("--electron", xa.electron, "Free electron");
  xsec->add_option("--ne", xa.ne, "Electron density (m^-3)");
  xsec->add_option("--te", xa.te, "Electron temperature (K)");
  xsec->add_option("--f", xa.f, "Frequency grid lo:hi:count (Hz)")->required();
  xsec->add_option("--regime", xa.regime, "auto, mie or rayleigh")->check(CLI::IsMember({"auto", "mie", "rayleigh"}));
  xsec->add_option("--rayleigh-fraction", xa.rayleigh_fraction, "Rayleigh when d < fraction * lambda");

  std::string prof_atm, prof_h;
  auto* profile = app.add_subcommand("profile", "Number densities versus altitude");
  profile->set_help_flag("--help", "Print this help message and exit");
  profile->add_option("atmosphere", prof_atm, "Atmosphere file")->required();
  profile->add_option("--h", prof_h, "Altitude grid lo:hi:count (m)")->required();

  LossArgs la;
  auto* loss = app.add_subcommand("loss", "Path loss breakdown");
  loss->add_option("atmosphere", la.atm, "Atmosphere file")->required();
  loss->add_option("--vertical", la.path.vertical, "Slant path h0:h1 (m) at --theta");
  loss->add_option("--theta", la.path.theta, "Elevation angle (rad), default pi/2");
  loss->add_option("--horizontal", la.path.horizontal, "Horizontal path h:r (m)");
  loss->add_option("--ground-distance", la.path.ground, "Straight path h0:h1:D (m)");
  loss->add_option("--f", la.f, "Frequency grid lo:hi:count (Hz)");
  loss->add_option("--band-ghz", la.band, "Band lo,hi (GHz)");
  loss->add_option("--band-points", la.band_points, "Trapezoid points across the band (1 = centre)");
  loss->add_option("--rain-rate-mmhr", la.weather.rain_rate, "Add rain at this rate");
  loss->add_option("--rain-top-m", la.weather.rain_top, "Rain layer top (m)");
  loss->add_option("--rain-spectrum", la.weather.rain_spectrum, "Rain drop spectrum file");
  loss->add_option("--cloud-top-m", la.weather.cloud_top, "Add cloud from 0 to this altitude (m)");
  loss->add_option("--cloud-spectrum", la.weather.cloud_spectrum, "Cloud drop spectrum file");
  loss->add_option("--rayleigh-fraction", la.rayleigh_fraction, "Rayleigh when d < fraction * lambda");

  std::string budget_file;
  int budget_points = 0;
  auto* budget = app.add_subcommand("budget", "Link budget table for a scenario");
  budget->add_option("scenario", budget_file, "Scenario file")->required();
  budget->add_option("--band-points", budget_points, "Override band averaging points");

  std::string sweep_file, sweep_f;
  auto* sweep = app.add_subcommand("sweep", "Per-frequency loss for every hop of a scenario");
  sweep->add_option("scenario", sweep_file, "Scenario file")->required();
  sweep->add_option("--f", sweep_f, "Frequency grid lo:hi:count (Hz)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!common.data_dir.empty()) {
      if (!fs::is_directory(common.data_dir)) throw UsageError("--data-dir is not a directory");
      set_data_dir(common.data_dir);
    }
    if (common.threads < 0) throw UsageError("--threads must be >= 0");
    std::string text;
    if (*xsec)
      text = run_xsec(common, xa);
    else if (*profile)
      text = run_profile(prof_atm, prof_h);
    else if (*loss)
      text = run_loss(common, la);
    else if (*budget)
      text = run_budget(common, budget_file, budget_points);
    else if (*sweep)
      text = run_sweep(common, sweep_file, sweep_f);
    write_output(common, text);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitOk;
}
