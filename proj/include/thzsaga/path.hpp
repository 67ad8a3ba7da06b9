#pragma once

#include <string>
#include <vector>

#include "thzsaga/atmosphere.hpp"
#include "thzsaga/geometry.hpp"

namespace thz {

struct LossBreakdown {
  double f_hz = 0.0;
  double fspl_db = 0.0;
  double mie_db = 0.0;
  double rayleigh_db = 0.0;
  double molecular_db = 0.0;
  double plasma_db = 0.0;
  double collisional_db = 0.0;
  double total_db = 0.0;
  std::string method = "center";
};

double fspl(double r, double f_hz);

struct LossOptions {
  double rayleigh_fraction = kDefaultRayleighFraction;
};

// Column densities are frequency independent, so they are integrated once
// per (model, path) and reused for every frequency.
class PathEvaluator {
 public:
  PathEvaluator(const AtmosphereModel& model, const PathGeometry& path, LossOptions options = {});

  LossBreakdown collisional(double f_hz) const;
  LossBreakdown total(double f_hz) const;

  const PathGeometry& path() const { return path_; }
  const AtmosphereModel& model() const { return *model_; }

  struct Column {
    SpeciesSelector selector;
    double column_m2 = 0.0;
  };
  const std::vector<Column>& columns() const { return columns_; }

 private:
  const AtmosphereModel* model_;
  PathGeometry path_;
  LossOptions options_;
  std::vector<Column> columns_;
};

LossBreakdown collisional_loss(const AtmosphereModel& model, const PathGeometry& path, double f_hz,
                               LossOptions options = {});
LossBreakdown total_loss(const AtmosphereModel& model, const PathGeometry& path, double f_hz,
                         LossOptions options = {});

// n_points == 1 evaluates the band centre. Otherwise each mechanism is
// averaged in linear power with the trapezoid rule over n_points.
LossBreakdown band_average_loss(const PathEvaluator& eval, double f_lo, double f_hi, int n_points);
LossBreakdown band_average_loss(const AtmosphereModel& model, const PathGeometry& path, double f_lo,
                                double f_hi, int n_points, LossOptions options = {});

}  // namespace thz
