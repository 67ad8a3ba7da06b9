#pragma once

#include <vector>

#include "thzsaga/path.hpp"
#include "thzsaga/xsection.hpp"

namespace thz {

// count points from lo to hi inclusive; count == 1 gives {lo}.
std::vector<double> frequency_grid(double lo, double hi, int count);

// Serial reference kernels. The OpenMP variants produce identical values in
// the same order; threads <= 0 keeps the OpenMP default.
std::vector<LossBreakdown> sweep_loss_serial(const PathEvaluator& eval, const std::vector<double>& f_hz);
std::vector<LossBreakdown> sweep_loss_omp(const PathEvaluator& eval, const std::vector<double>& f_hz,
                                          int threads = 0);

std::vector<DispatchedCrossSections> sweep_drop_serial(double d, const RefractiveModel& model,
                                                       const std::vector<double>& f_hz,
                                                       double rayleigh_fraction = kDefaultRayleighFraction);
std::vector<DispatchedCrossSections> sweep_drop_omp(double d, const RefractiveModel& model,
                                                    const std::vector<double>& f_hz,
                                                    double rayleigh_fraction = kDefaultRayleighFraction,
                                                    int threads = 0);

int omp_max_threads();

}  // namespace thz
