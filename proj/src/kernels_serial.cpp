#include <cmath>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"
#include "thzsaga/kernels.hpp"

namespace thz {

std::vector<double> frequency_grid(double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorCode::validation, "grid needs count >= 1", "frequency_grid");
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw Error(ErrorCode::validation, "grid needs 0 < lo <= hi", "frequency_grid");
  if (count == 1) return {lo};
  std::vector<double> f(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) f[std::size_t(i)] = lo + (hi - lo) * i / (count - 1);
  f.back() = hi;
  return f;
}

std::vector<LossBreakdown> sweep_loss_serial(const PathEvaluator& eval, const std::vector<double>& f_hz) {
  std::vector<LossBreakdown> out;
  out.reserve(f_hz.size());
  for (double f : f_hz) out.push_back(eval.total(f));
  return out;
}

std::vector<DispatchedCrossSections> sweep_drop_serial(double d, const RefractiveModel& model,
                                                       const std::vector<double>& f_hz, double fraction) {
  std::vector<DispatchedCrossSections> out;
  out.reserve(f_hz.size());
  for (double f : f_hz) out.push_back(auto_cross_sections(d, constants::c / f, model, fraction));
  return out;
}

}  // namespace thz
