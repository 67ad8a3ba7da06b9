#pragma once

#include <complex>
#include <vector>

namespace thz {

using cplx = std::complex<double>;

// Spherical Bessel and Hankel functions for the Mie series.
//
// Time convention is exp(-i w t): h_m = j_m + i y_m (first kind), and an
// absorbing medium has Im(q) > 0.

inline constexpr double kSpecfunMaxArg = 1.0e4;
inline constexpr int kSpecfunMaxOrder = 10000;

enum class RiccatiKind { bessel_j, hankel1 };

struct RiccatiValue {
  cplx value;       // f_m(z)
  cplx derivative;  // d/dz [z f_m(z)]
};

cplx sph_bessel_j(int m, cplx z);

// j_0 .. j_mmax from one downward sweep.
std::vector<cplx> sph_bessel_j_all(int mmax, cplx z);

double sph_bessel_y(int m, double x);
std::vector<double> sph_bessel_y_all(int mmax, double x);

cplx sph_hankel1(int m, double x);
std::vector<cplx> sph_hankel1_all(int mmax, double x);

// hankel1 requires a positive real z.
RiccatiValue riccati_pair(int m, cplx z, RiccatiKind kind);

}  // namespace thz
