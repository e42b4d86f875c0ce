#pragma once

#include <cmath>

namespace gridride {

// Planar point in km. All distances in the model are Euclidean on these
// coordinates; geographic input is projected once at ingestion.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Equirectangular projection anchored at (lat0, lon0), output in km.
// Adequate at metro scale; the simulator never needs geodesics.
inline Point project_equirect(double lat_deg, double lon_deg, double lat0_deg,
                              double lon0_deg) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDegToRad = 0.017453292519943295;
  double lat = lat_deg * kDegToRad;
  double lon = lon_deg * kDegToRad;
  double lat0 = lat0_deg * kDegToRad;
  double lon0 = lon0_deg * kDegToRad;
  return Point{kEarthRadiusKm * (lon - lon0) * std::cos(lat0),
               kEarthRadiusKm * (lat - lat0)};
}

}  // namespace gridride
