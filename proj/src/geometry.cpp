#include "thzsaga/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "thzsaga/constants.hpp"
#include "thzsaga/error.hpp"

namespace thz {

namespace {
constexpr double kElevationSlack = 1e-4;
}

PathGeometry PathGeometry::slant(double h0, double h1, double theta) {
  static const char* fn = "PathGeometry::slant";
  if (!(h0 >= 0.0) || !(h1 >= 0.0) || std::isnan(h1))
    throw Error(ErrorCode::validation, "altitudes must be >= 0", fn);
  if (!std::isfinite(h0)) throw Error(ErrorCode::validation, "start altitude must be finite", fn);
  if (!(theta > 0.0) || theta > constants::pi / 2 + kElevationSlack)
    throw Error(ErrorCode::validation, "elevation must lie in (0, pi/2]", fn);
  if (theta > constants::pi / 2) theta = constants::pi / 2;
  if (h0 == h1) throw Error(ErrorCode::validation, "slant path needs distinct altitudes", fn);
  PathGeometry g;
  g.h0 = h0;
  g.h1 = h1;
  g.elevation = theta;
  g.length = std::isinf(h1) ? std::numeric_limits<double>::infinity() : std::abs(h1 - h0) / std::sin(theta);
  return g;
}

PathGeometry PathGeometry::vertical(double h0, double h1) { return slant(h0, h1, constants::pi / 2); }

PathGeometry PathGeometry::horizontal_at(double h, double r) {
  if (!(h >= 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::validation, "altitude must be >= 0", "PathGeometry::horizontal_at");
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorCode::validation, "length must be positive", "PathGeometry::horizontal_at");
  PathGeometry g;
  g.h0 = g.h1 = h;
  g.length = r;
  g.horizontal = true;
  return g;
}

PathGeometry PathGeometry::ground_distance(double h0, double h1, double D) {
  if (!(D > 0.0) || !std::isfinite(D))
    throw Error(ErrorCode::validation, "ground distance must be positive", "PathGeometry::ground_distance");
  PathGeometry g = slant(h0, h1, std::atan2(std::abs(h1 - h0), D));
  g.length = std::hypot(D, h1 - h0);
  return g;
}

std::string PathGeometry::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (horizontal)
    os << "horizontal h=" << h0 << " m r=" << length << " m";
  else
    os << "slant h0=" << h0 << " m h1=" << h1 << " m theta=" << elevation << " rad r=" << length << " m";
  return os.str();
}

}  // namespace thz
