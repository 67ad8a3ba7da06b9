#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "thzsaga/error.hpp"

namespace testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline std::string source_path(const std::string& rel_path) {
  return std::string(THZSAGA_SOURCE_DIR) + "/" + rel_path;
}

template <class F>
thz::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const thz::Error& e) {
    return e.code();
  }
  FAIL("expected thz::Error");
  return thz::ErrorCode::numerical;
}

}  // namespace testing
