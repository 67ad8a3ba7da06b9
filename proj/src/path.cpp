#include "thzsaga/path.hpp"

#include <algorithm>
#include <cmath>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"

namespace thz {

namespace {

// Weighted mean of 10^(-L/10), returned in dB; shifted by min(L) so very
// large losses do not underflow.
double mean_power_db(const std::vector<double>& L, const std::vector<double>& w) {
  double lmin = L[0];
  for (double v : L) lmin = std::min(lmin, v);
  double acc = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    acc += w[i] * std::pow(10.0, -(L[i] - lmin) / 10.0);
    wsum += w[i];
  }
  return lmin - 10.0 * std::log10(acc / wsum);
}

}  // namespace

double fspl(double r, double f_hz) {
  if (!(r > 0.0) || !(f_hz > 0.0)) throw Error(ErrorCode::out_of_domain, "r and f must be positive", "fspl");
  return 20.0 * std::log10(4.0 * constants::pi * r * f_hz / constants::c);
}

PathEvaluator::PathEvaluator(const AtmosphereModel& model, const PathGeometry& path, LossOptions options)
    : model_(&model), path_(path), options_(options) {
  for (std::size_t i = 0; i < model.gases.size(); ++i) {
    SpeciesSelector s{SpeciesClass::gas, i, 0};
    columns_.push_back({s, column_density(model, s, path)});
  }
  for (std::size_t i = 0; i < model.hydrometeors.size(); ++i)
    for (std::size_t b = 0; b < model.hydrometeors[i].bins.size(); ++b) {
      SpeciesSelector s{SpeciesClass::hydrometeor, i, b};
      columns_.push_back({s, column_density(model, s, path)});
    }
  for (std::size_t i = 0; i < model.plasma.size(); ++i) {
    SpeciesSelector s{SpeciesClass::electron, i, 0};
    columns_.push_back({s, column_density(model, s, path)});
  }
}

LossBreakdown PathEvaluator::collisional(double f_hz) const {
  if (!(f_hz > 0.0)) throw Error(ErrorCode::out_of_domain, "frequency must be positive", "collisional_loss");
  const double lambda = constants::c / f_hz;
  const double k = constants::db_per_neper;
  LossBreakdown out;
  out.f_hz = f_hz;
  for (const auto& col : columns_) {
    if (col.column_m2 == 0.0) continue;
    const auto& s = col.selector;
    switch (s.cls) {
      case SpeciesClass::gas: {
        const auto& sp = model_->gases[s.index].species;
        const double sigma = molecular_absorption_xs(sp, f_hz) + molecular_scattering_xs(sp, lambda);
        out.molecular_db += k * sigma * col.column_m2;
        break;
      }
      case SpeciesClass::hydrometeor: {
        const auto& layer = model_->hydrometeors[s.index];
        const double d = layer.bins[s.bin].diameter_m;
        const auto r = auto_cross_sections(d, lambda, layer.refractive, options_.rayleigh_fraction);
        const double db = k * r.xs.total() * col.column_m2;
        (r.regime == Regime::mie ? out.mie_db : out.rayleigh_db) += db;
        break;
      }
      case SpeciesClass::electron: {
        const auto& layer = model_->plasma[s.index];
        double sa = 0.0;
        try {
          sa = coulomb_absorption_xs(f_hz, layer.state);
        } catch (const Error& e) {
          throw Error(e.code(), e.what(), "plasma layer '" + layer.name + "'");
        }
        out.plasma_db += k * (sa + thomson_scattering_xs()) * col.column_m2;
        break;
      }
    }
  }
  out.collisional_db = out.mie_db + out.rayleigh_db + out.molecular_db + out.plasma_db;
  out.total_db = out.collisional_db;
  return out;
}

LossBreakdown PathEvaluator::total(double f_hz) const {
  LossBreakdown out = collisional(f_hz);
  out.fspl_db = fspl(path_.length, f_hz);
  out.total_db = out.fspl_db + out.collisional_db;
  return out;
}

LossBreakdown collisional_loss(const AtmosphereModel& model, const PathGeometry& path, double f_hz,
                               LossOptions options) {
  return PathEvaluator(model, path, options).collisional(f_hz);
}

LossBreakdown total_loss(const AtmosphereModel& model, const PathGeometry& path, double f_hz, LossOptions options) {
  return PathEvaluator(model, path, options).total(f_hz);
}

LossBreakdown band_average_loss(const PathEvaluator& eval, double f_lo, double f_hi, int n_points) {
  static const char* fn = "band_average_loss";
  if (!(f_lo < f_hi)) throw Error(ErrorCode::validation, "band needs f_lo < f_hi", fn);
  if (n_points < 1) throw Error(ErrorCode::validation, "n_points must be >= 1", fn);
  const double fc = 0.5 * (f_lo + f_hi);
  if (n_points == 1) return eval.total(fc);

  std::vector<double> w, fs, mie, ray, mol, pl;
  for (int i = 0; i < n_points; ++i) {
    const double f = f_lo + (f_hi - f_lo) * i / (n_points - 1);
    const LossBreakdown r = eval.total(f);
    w.push_back((i == 0 || i == n_points - 1) ? 0.5 : 1.0);
    fs.push_back(r.fspl_db);
    mie.push_back(r.mie_db);
    ray.push_back(r.rayleigh_db);
    mol.push_back(r.molecular_db);
    pl.push_back(r.plasma_db);
  }
  LossBreakdown out;
  out.f_hz = fc;
  out.fspl_db = mean_power_db(fs, w);
  out.mie_db = mean_power_db(mie, w);
  out.rayleigh_db = mean_power_db(ray, w);
  out.molecular_db = mean_power_db(mol, w);
  out.plasma_db = mean_power_db(pl, w);
  out.collisional_db = out.mie_db + out.rayleigh_db + out.molecular_db + out.plasma_db;
  out.total_db = out.fspl_db + out.collisional_db;
  out.method = "trapezoid:" + std::to_string(n_points);
  return out;
}

LossBreakdown band_average_loss(const AtmosphereModel& model, const PathGeometry& path, double f_lo, double f_hi,
                                int n_points, LossOptions options) {
  return band_average_loss(PathEvaluator(model, path, options), f_lo, f_hi, n_points);
}

}  // namespace thz
