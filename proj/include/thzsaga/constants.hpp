#pragma once

namespace thz::constants {

// CODATA 2018 exact or recommended values, SI units.
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double c = 299792458.0;
inline constexpr double q_e = 1.602176634e-19;
inline constexpr double m_e = 9.1093837015e-31;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double k_B = 1.380649e-23;
inline constexpr double N_A = 6.02214076e23;
inline constexpr double g = 9.80665;
inline constexpr double amu = 1.66053906660e-27;

// Thermal noise floor, dBm/Hz.
inline constexpr double N0_dbm_per_hz = -174.0;

// 10 log10(e): converts an optical depth in nepers-of-intensity to dB.
inline constexpr double db_per_neper = 4.342944819032518;

}  // namespace thz::constants
