// Serial vs OpenMP timing for the loss sweep and drop cross-section kernels.
//
// usage: bench_sweep [points] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "thzsaga/constants.hpp"
#include "thzsaga/data_io.hpp"
#include "thzsaga/kernels.hpp"

using namespace thz;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

double max_rel_diff(const std::vector<LossBreakdown>& a, const std::vector<LossBreakdown>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i].total_db - b[i].total_db) / std::max(1.0, std::abs(a[i].total_db)));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  if (points < 1 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_sweep [points>=1] [repeats>=1]\n");
    return 2;
  }
  try {
    const AtmosphereModel base = load_atmosphere_file(resolve_ref("atmospheres/saturated.atm"));
    Weather w;
    w.name = "rain";
    w.rain_rate_mmhr = 50.0;
    const auto sp = resolve_ref(w.rain_spectrum_ref);
    w.rain_spectrum = load_drop_spectrum(read_file(sp), sp.string());
    const AtmosphereModel rainy = apply_weather(base, w);
    const PathEvaluator eval(rainy, PathGeometry::vertical(0.0, 550e3));
    const auto f = frequency_grid(100e9, 1000e9, points);

    std::vector<LossBreakdown> s, p;
    const double ts = best_of(repeats, [&] { s = sweep_loss_serial(eval, f); });
    const double tp = best_of(repeats, [&] { p = sweep_loss_omp(eval, f); });
    std::printf("loss sweep    points=%d threads=%d serial=%.4fs omp=%.4fs speedup=%.2f max_rel_diff=%.3g\n", points,
                omp_max_threads(), ts, tp, ts / tp, max_rel_diff(s, p));

    const RefractiveModel water = RefractiveModel::water(298.15);
    std::vector<DispatchedCrossSections> ds, dp;
    const double ms = best_of(repeats, [&] { ds = sweep_drop_serial(4e-3, water, f); });
    const double mp = best_of(repeats, [&] { dp = sweep_drop_omp(4e-3, water, f); });
    double dmax = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      dmax = std::max(dmax, std::abs(ds[i].xs.total() - dp[i].xs.total()) / ds[i].xs.total());
    std::printf("mie d=4mm     points=%d threads=%d serial=%.4fs omp=%.4fs speedup=%.2f max_rel_diff=%.3g\n", points,
                omp_max_threads(), ms, mp, ms / mp, dmax);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
