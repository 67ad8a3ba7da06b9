#include "thzsaga/specfun.hpp"

#include <cmath>
#include <string>

#include "thzsaga/error.hpp"

namespace thz {

namespace {

constexpr double kSeriesRadius = 0.25;
constexpr double kRescale = 1.0e250;
// exp(|Im z|) must stay representable.
constexpr double kMaxImag = 700.0;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void guard_order(int m, const char* fn) {
  if (m < 0 || m > kSpecfunMaxOrder)
    throw Error(ErrorCode::out_of_domain, "order " + std::to_string(m) + " outside [0, 10000]", fn);
}

void guard_arg(cplx z, const char* fn) {
  if (!finite(z) || std::abs(z) >= kSpecfunMaxArg)
    throw Error(ErrorCode::out_of_domain, "|z| must be finite and below 1e4", fn);
  if (std::abs(z.imag()) > kMaxImag)
    throw Error(ErrorCode::out_of_domain, "|Im z| above 700 overflows", fn);
}

cplx checked(cplx v, const char* fn) {
  if (!finite(v)) throw Error(ErrorCode::numerical, "non-finite result", fn);
  return v;
}

// j_m(z) = z^m/(2m+1)!! * sum_k (-z^2/2)^k / (k! (2m+3)(2m+5)...(2m+2k+1))
cplx series_j(int m, cplx z) {
  cplx lead = 1.0;
  for (int k = 1; k <= m; ++k) lead *= z / double(2 * k + 1);
  const cplx w = -0.5 * z * z;
  cplx term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= w / (double(k) * double(2 * m + 2 * k + 1));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

int miller_start(int mmax, double az) {
  const double base = std::max(double(mmax), az);
  return int(std::ceil(base + 30.0 + 4.0 * std::cbrt(az)));
}

}  // namespace

std::vector<cplx> sph_bessel_j_all(int mmax, cplx z) {
  static const char* fn = "sph_bessel_j";
  guard_order(mmax, fn);
  guard_arg(z, fn);
  std::vector<cplx> out(std::size_t(mmax) + 1);
  const double az = std::abs(z);
  if (az == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (az < kSeriesRadius) {
    for (int m = 0; m <= mmax; ++m) out[std::size_t(m)] = series_j(m, z);
    return out;
  }

  // Miller: the minimal solution dominates a downward recurrence started
  // from arbitrary values well above max(m, |z|).
  const int top = miller_start(mmax, az);
  cplx fp1 = 0.0, f = 1.0e-300;
  for (int k = top; k > 0; --k) {
    const cplx fm1 = double(2 * k + 1) / z * f - fp1;
    fp1 = f;
    f = fm1;
    if (k - 1 <= mmax) out[std::size_t(k - 1)] = f;
    if (std::abs(f) > kRescale) {
      const double s = 1.0 / std::abs(f);
      f *= s;
      fp1 *= s;
      for (int j = k - 1; j <= mmax; ++j) out[std::size_t(j)] *= s;
    }
  }
  // f now holds the unnormalized j_0, fp1 the unnormalized j_1.
  const cplx j0 = std::sin(z) / z;
  const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const cplx scale = std::abs(f) >= std::abs(fp1) ? j0 / f : j1 / fp1;
  for (auto& v : out) v = checked(v * scale, fn);
  return out;
}

cplx sph_bessel_j(int m, cplx z) { return sph_bessel_j_all(m, z)[std::size_t(m)]; }

std::vector<double> sph_bessel_y_all(int mmax, double x) {
  static const char* fn = "sph_bessel_y";
  guard_order(mmax, fn);
  if (!(x > 0.0) || x >= kSpecfunMaxArg)
    throw Error(ErrorCode::out_of_domain, "x must lie in (0, 1e4)", fn);
  std::vector<double> out(std::size_t(mmax) + 1);
  const double s = std::sin(x), c = std::cos(x);
  out[0] = -c / x;
  if (mmax >= 1) out[1] = -c / (x * x) - s / x;
  for (int m = 1; m < mmax; ++m) {
    out[std::size_t(m + 1)] = double(2 * m + 1) / x * out[std::size_t(m)] - out[std::size_t(m - 1)];
    if (!std::isfinite(out[std::size_t(m + 1)]))
      throw Error(ErrorCode::numerical, "y_m overflow at order " + std::to_string(m + 1), fn);
  }
  return out;
}

double sph_bessel_y(int m, double x) { return sph_bessel_y_all(m, x)[std::size_t(m)]; }

std::vector<cplx> sph_hankel1_all(int mmax, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::out_of_domain, "x must be positive", "sph_hankel1");
  const auto j = sph_bessel_j_all(mmax, cplx(x, 0.0));
  const auto y = sph_bessel_y_all(mmax, x);
  std::vector<cplx> out(j.size());
  for (std::size_t m = 0; m < j.size(); ++m) out[m] = cplx(j[m].real(), y[m]);
  return out;
}

cplx sph_hankel1(int m, double x) { return sph_hankel1_all(m, x)[std::size_t(m)]; }

RiccatiValue riccati_pair(int m, cplx z, RiccatiKind kind) {
  if (kind == RiccatiKind::bessel_j) {
    const auto j = sph_bessel_j_all(m, z);
    if (m == 0) return {j[0], std::cos(z)};
    return {j[std::size_t(m)], z * j[std::size_t(m - 1)] - double(m) * j[std::size_t(m)]};
  }
  if (z.imag() != 0.0)
    throw Error(ErrorCode::out_of_domain, "hankel-1 pair needs a real argument", "riccati_pair");
  const double x = z.real();
  const auto h = sph_hankel1_all(m, x);
  if (m == 0) return {h[0], std::exp(cplx(0.0, x))};
  return {h[std::size_t(m)], x * h[std::size_t(m - 1)] - double(m) * h[std::size_t(m)]};
}

}  // namespace thz
