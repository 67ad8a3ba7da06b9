#pragma once

#include <string>

namespace thz {

// Flat-earth path. Slant paths run between h0 and h1 at elevation theta with
// length |h1 - h0| / sin(theta); horizontal paths stay at altitude h0.
struct PathGeometry {
  double h0 = 0.0;
  double h1 = 0.0;
  double elevation = 0.0;  // rad
  double length = 0.0;     // m, +inf for an unbounded slant
  bool horizontal = false;

  static PathGeometry slant(double h0, double h1, double theta);
  static PathGeometry vertical(double h0, double h1);
  static PathGeometry horizontal_at(double h, double r);
  // Straight line to a point at ground distance D and altitude h1.
  static PathGeometry ground_distance(double h0, double h1, double D);

  double h_lo() const { return h0 < h1 ? h0 : h1; }
  double h_hi() const { return h0 < h1 ? h1 : h0; }
  std::string describe() const;
};

}  // namespace thz
