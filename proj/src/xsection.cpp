#include "thzsaga/xsection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thzsaga/constants.hpp"
#include "thzsaga/data_io.hpp"
#include "thzsaga/error.hpp"

namespace thz {

namespace {

using constants::pi;

double poly(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

void require_positive(double v, const char* name, const char* fn) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::out_of_domain, std::string(name) + " must be positive and finite", fn);
}

constexpr double kMieTol = 1e-9;
constexpr int kMieExtraOrders = 10;

}  // namespace

double DoubleDebyeParams::temperature_variable(double T) const {
  return variable == TempVariable::celsius ? T - 273.15 : 300.0 / T - 1.0;
}

cplx DoubleDebyeParams::permittivity(double f_hz, double T) const {
  const double t = temperature_variable(T);
  const double es = poly(eps_s, t), e1 = poly(eps_1, t), einf = poly(eps_inf, t);
  const double f1 = poly(fD1_hz, t), f2 = poly(fD2_hz, t);
  const cplx i(0.0, 1.0);
  return einf + (es - e1) / (1.0 - i * f_hz / f1) + (e1 - einf) / (1.0 - i * f_hz / f2);
}

cplx water_refractive_index(double f_hz, double T, const DoubleDebyeParams& p) {
  static const char* fn = "water_refractive_index";
  const double slack = 1e-9;
  if (!(f_hz >= p.f_min_hz * (1 - slack) && f_hz <= p.f_max_hz * (1 + slack)))
    throw Error(ErrorCode::out_of_domain, "frequency " + std::to_string(f_hz) + " Hz outside model range", fn);
  if (!(T > p.T_min_K && T < p.T_max_K))
    throw Error(ErrorCode::out_of_domain, "temperature " + std::to_string(T) + " K outside model range", fn);
  return std::sqrt(p.permittivity(f_hz, T));
}

cplx water_refractive_index(double f_hz, double T) {
  return water_refractive_index(f_hz, T, *default_double_debye());
}

RefractiveModel RefractiveModel::fixed(cplx q, double mu1) {
  if (!(mu1 > 0.0)) throw Error(ErrorCode::validation, "mu1 must be positive", "RefractiveModel");
  if (q.imag() < 0.0) throw Error(ErrorCode::validation, "Im(q) must be >= 0", "RefractiveModel");
  RefractiveModel m;
  m.q_ = q;
  m.mu1_ = mu1;
  return m;
}

RefractiveModel RefractiveModel::water(double T, double mu1) { return water(T, default_double_debye(), mu1); }

RefractiveModel RefractiveModel::water(double T, std::shared_ptr<const DoubleDebyeParams> params, double mu1) {
  if (!(mu1 > 0.0)) throw Error(ErrorCode::validation, "mu1 must be positive", "RefractiveModel");
  RefractiveModel m;
  m.water_ = true;
  m.T_ = T;
  m.mu1_ = mu1;
  m.params_ = std::move(params);
  return m;
}

cplx RefractiveModel::q_at(double f_hz) const {
  return water_ ? water_refractive_index(f_hz, T_, *params_) : q_;
}

int mie_truncation_order(double xi) { return int(std::ceil(xi + 4.0 * std::cbrt(xi) + 2.0)); }

CrossSections mie_cross_sections(double d, double lambda, cplx q, double mu1, int m_max) {
  static const char* fn = "mie_cross_sections";
  require_positive(d, "diameter", fn);
  require_positive(lambda, "wavelength", fn);
  require_positive(mu1, "mu1", fn);
  if (!(q.imag() >= 0.0) || !std::isfinite(q.real()))
    throw Error(ErrorCode::out_of_domain, "refractive index needs finite q with Im(q) >= 0", fn);
  const double xi = pi * d / lambda;
  const int M = m_max > 0 ? m_max : mie_truncation_order(xi);
  const int Mx = M + kMieExtraOrders;

  const cplx z = q * xi;
  const auto jx = sph_bessel_j_all(Mx, cplx(xi, 0.0));
  const auto yx = sph_bessel_y_all(Mx, xi);
  const auto jz = sph_bessel_j_all(Mx, z);
  const cplx q2 = q * q;

  double ext = 0.0, sca = 0.0, ext_M = 0.0, sca_M = 0.0;
  for (int m = 1; m <= Mx; ++m) {
    const auto k = std::size_t(m);
    const double dm = m;
    const cplx hx(jx[k].real(), yx[k]);
    const cplx hxm(jx[k - 1].real(), yx[k - 1]);
    const cplx djx = xi * jx[k - 1] - dm * jx[k];
    const cplx dhx = xi * hxm - dm * hx;
    const cplx djz = z * jz[k - 1] - dm * jz[k];

    const cplx a = (q2 * jz[k] * djx - mu1 * jx[k] * djz) / (q2 * jz[k] * dhx - mu1 * hx * djz);
    const cplx b = (mu1 * jz[k] * djx - jx[k] * djz) / (mu1 * jz[k] * dhx - hx * djz);
    const double w = 2.0 * dm + 1.0;
    ext += w * (a + b).real();
    sca += w * (std::norm(a) + std::norm(b));
    if (m == M) {
      ext_M = ext;
      sca_M = sca;
    }
  }
  if (!std::isfinite(ext) || !std::isfinite(sca))
    throw Error(ErrorCode::numerical, "non-finite Mie coefficients", fn);
  const double floor = 1e-300;
  if (std::abs(ext - ext_M) > kMieTol * std::abs(ext) + floor ||
      std::abs(sca - sca_M) > kMieTol * std::abs(sca) + floor)
    throw Error(ErrorCode::convergence,
                "series not converged at m_max=" + std::to_string(M) + " (xi=" + std::to_string(xi) + ")", fn);

  const double pre = pi * d * d / (2.0 * xi * xi);
  CrossSections out{pre * (ext_M - sca_M), pre * sca_M};
  const double tol = std::max(1e-30, 1e-10 * std::abs(pre * ext_M));
  if (out.absorption < 0.0) {
    if (out.absorption < -tol)
      throw Error(ErrorCode::numerical, "negative absorption " + std::to_string(out.absorption), fn);
    out.absorption = 0.0;
  }
  if (out.scattering < 0.0) out.scattering = 0.0;
  return out;
}

CrossSections mie_cross_sections(double d, double lambda, const RefractiveModel& model) {
  return mie_cross_sections(d, lambda, model.q_at(constants::c / lambda), model.mu1());
}

CrossSections rayleigh_cross_sections(double d, double lambda, cplx q) {
  static const char* fn = "rayleigh_cross_sections";
  require_positive(d, "diameter", fn);
  require_positive(lambda, "wavelength", fn);
  const cplx q2 = q * q;
  const cplx den = q2 + 2.0;
  if (std::abs(den) < 1e-12) throw Error(ErrorCode::singularity, "q^2 = -2 resonance", fn);
  const cplx K = (q2 - 1.0) / den;
  // Small-sphere limit of the Mie series under exp(-i w t).
  const double sa = pi * pi * d * d * d / lambda * K.imag();
  const double ratio = d / lambda;
  const double ss = (2.0 * std::pow(pi, 5) / 3.0) * d * d * std::pow(ratio, 4) * std::norm(K);
  return {std::max(sa, 0.0), std::max(ss, 0.0)};
}

const char* to_string(Regime r) { return r == Regime::rayleigh ? "rayleigh" : "mie"; }

Regime select_regime(double d, double lambda, double fraction) {
  return d < fraction * lambda ? Regime::rayleigh : Regime::mie;
}

DispatchedCrossSections auto_cross_sections(double d, double lambda, const RefractiveModel& model,
                                            double fraction) {
  require_positive(d, "diameter", "auto_cross_sections");
  require_positive(lambda, "wavelength", "auto_cross_sections");
  const Regime r = select_regime(d, lambda, fraction);
  if (r == Regime::rayleigh)
    return {rayleigh_cross_sections(d, lambda, model.q_at(constants::c / lambda)), r};
  return {mie_cross_sections(d, lambda, model), r};
}

double molecular_scattering_xs(double lambda, double alpha) {
  require_positive(lambda, "wavelength", "molecular_scattering_xs");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::out_of_domain, "alpha must be >= 0", "molecular_scattering_xs");
  const double k = 2.0 * pi / lambda;
  return (8.0 * pi / 3.0) * std::pow(k, 4) * alpha * alpha;
}

double AbsorptionTable::interpolate(double f) const {
  if (f_hz.size() < 2 || !(f >= f_hz.front() && f <= f_hz.back()))
    throw Error(ErrorCode::out_of_range,
                "frequency " + std::to_string(f) + " Hz outside table [" + std::to_string(f_hz.front()) + ", " +
                    std::to_string(f_hz.back()) + "]",
                "absorption table " + species);
  auto it = std::lower_bound(f_hz.begin(), f_hz.end(), f);
  auto i = std::size_t(it - f_hz.begin());
  if (*it == f) return sigma_m2[i];
  const double f0 = f_hz[i - 1], f1 = f_hz[i];
  const double s0 = sigma_m2[i - 1], s1 = sigma_m2[i];
  const double t = (f - f0) / (f1 - f0);
  if (s0 <= 0.0 || s1 <= 0.0) return s0 + t * (s1 - s0);
  return std::exp(std::log(s0) + t * (std::log(s1) - std::log(s0)));
}

double molecular_absorption_xs(const GasSpecies& s, double f_hz) {
  if (s.is_mixture()) {
    double acc = 0.0;
    for (const auto& [w, c] : s.components) acc += w * molecular_absorption_xs(*c, f_hz);
    return acc;
  }
  if (!s.table) return 0.0;
  return s.table->interpolate(f_hz);
}

double molecular_scattering_xs(const GasSpecies& s, double lambda) {
  if (s.is_mixture()) {
    double acc = 0.0;
    for (const auto& [w, c] : s.components) acc += w * molecular_scattering_xs(*c, lambda);
    return acc;
  }
  return molecular_scattering_xs(lambda, s.polarizability_m3);
}

double plasma_frequency(double n_e) {
  if (!(n_e >= 0.0)) throw Error(ErrorCode::out_of_domain, "n_e must be >= 0", "plasma_frequency");
  return constants::q_e / (2.0 * pi) * std::sqrt(n_e / (constants::eps0 * constants::m_e));
}

double gaunt_log(double T, double f_hz) {
  static const char* fn = "gaunt_log";
  require_positive(T, "temperature", fn);
  require_positive(f_hz, "frequency", fn);
  const double v = T <= 9.1e5 ? 38.3 + 1.5 * std::log(T) - std::log(f_hz) : 45.3 + std::log(T) - std::log(f_hz);
  if (!(v > 0.0))
    throw Error(ErrorCode::degenerate_plasma, "ln(Lambda) = " + std::to_string(v) + " <= 0", fn);
  return v;
}

double coulomb_absorption_xs(double f_hz, const PlasmaState& p) {
  static const char* fn = "coulomb_absorption_xs";
  require_positive(p.n_e, "n_e", fn);
  require_positive(p.T, "temperature", fn);
  require_positive(f_hz, "frequency", fn);
  const double fpe = plasma_frequency(p.n_e);
  if (!(f_hz > fpe))
    throw Error(ErrorCode::evanescent,
                "f=" + std::to_string(f_hz) + " Hz at or below plasma frequency " + std::to_string(fpe) + " Hz", fn);
  const double kappa0 = 1.76e-16 * gaunt_log(p.T, f_hz) / std::pow(p.T, 1.5);
  const double r = fpe * fpe / (f_hz * f_hz);
  return kappa0 / p.n_e * (fpe * fpe * r) / std::sqrt(1.0 - r);
}

double thomson_scattering_xs() {
  const double r_e = constants::q_e * constants::q_e /
                     (4.0 * pi * constants::eps0 * constants::m_e * constants::c * constants::c);
  return 8.0 * pi / 3.0 * r_e * r_e;
}

}  // namespace thz
