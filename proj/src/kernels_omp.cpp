#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "thzsaga/constants.hpp"
#include "thzsaga/kernels.hpp"

namespace thz {

namespace {

// Runs body(i) for every index; the exception from the lowest failing index
// is rethrown after the parallel region.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
  std::vector<std::exception_ptr> errors(n);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
#endif
  for (long i = 0; i < long(n); ++i) {
    try {
      body(std::size_t(i));
    } catch (...) {
      errors[std::size_t(i)] = std::current_exception();
    }
  }
  (void)threads;
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

int omp_max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<LossBreakdown> sweep_loss_omp(const PathEvaluator& eval, const std::vector<double>& f_hz, int threads) {
  std::vector<LossBreakdown> out(f_hz.size());
  parallel_for(f_hz.size(), threads, [&](std::size_t i) { out[i] = eval.total(f_hz[i]); });
  return out;
}

std::vector<DispatchedCrossSections> sweep_drop_omp(double d, const RefractiveModel& model,
                                                    const std::vector<double>& f_hz, double fraction, int threads) {
  std::vector<DispatchedCrossSections> out(f_hz.size());
  parallel_for(f_hz.size(), threads,
               [&](std::size_t i) { out[i] = auto_cross_sections(d, constants::c / f_hz[i], model, fraction); });
  return out;
}

}  // namespace thz
