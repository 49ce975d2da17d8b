#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ridgeline/errors.hpp"

namespace ridgeline {

inline constexpr double kPi = std::numbers::pi;

// Mean Earth radius; one physical constant expressed in two units.
inline constexpr double kEarthRadiusMiles = 3958.7613;
inline constexpr double kEarthRadiusKm = 6371.0088;

inline double degrees_to_radians(double deg) { return deg * (kPi / 180.0); }
inline double radians_to_degrees(double rad) { return rad * (180.0 / kPi); }
inline double miles_to_radians(double mi) { return mi / kEarthRadiusMiles; }
inline double radians_to_miles(double rad) { return rad * kEarthRadiusMiles; }
inline double km_to_radians(double km) { return km / kEarthRadiusKm; }
inline double radians_to_km(double rad) { return rad * kEarthRadiusKm; }

// Latitude-longitude pair in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

using GeoPointSet = std::vector<GeoPoint>;

inline void validate(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0))
    throw DomainError("lat out of range [-90, 90]: " + std::to_string(p.lat));
  if (!(p.lon >= -180.0 && p.lon <= 180.0))
    throw DomainError("lon out of range [-180, 180]: " + std::to_string(p.lon));
}

inline void validate(const GeoPointSet& pts) {
  for (const auto& p : pts) validate(p);
}

// Great-circle distance. Canonical unit is radians on the unit sphere;
// miles and kilometers are boundary views through the Earth radius constant.
struct Distance {
  double rad = 0.0;

  static Distance from_radians(double r) { return {r}; }
  static Distance from_miles(double mi) { return {miles_to_radians(mi)}; }
  static Distance from_km(double km) { return {km_to_radians(km)}; }
  double radians() const { return rad; }
  double miles() const { return radians_to_miles(rad); }
  double kilometers() const { return radians_to_km(rad); }
  auto operator<=>(const Distance&) const = default;
};

// Central angle between two points via the haversine formula,
// hav(x) = sin^2(x/2). Well-conditioned for small separations. Coordinates
// convert to radians individually so the result is bit-identical to the
// kernel paths that precompute per-point radians.
inline double haversine_angle(const GeoPoint& a, const GeoPoint& b) {
  validate(a);
  validate(b);
  const double phi1 = degrees_to_radians(a.lat);
  const double phi2 = degrees_to_radians(b.lat);
  const double sp = std::sin((phi2 - phi1) * 0.5);
  const double sl =
      std::sin((degrees_to_radians(b.lon) - degrees_to_radians(a.lon)) * 0.5);
  const double h =
      std::clamp(sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl, 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(h));
}

inline Distance haversine(const GeoPoint& a, const GeoPoint& b) {
  return Distance::from_radians(haversine_angle(a, b));
}

// Spherical law of cosines. Kept as a cross-check for haversine; its arccos
// form is worse-conditioned near zero separation.
inline double central_angle_law_of_cosines(const GeoPoint& a, const GeoPoint& b) {
  validate(a);
  validate(b);
  const double phi1 = degrees_to_radians(a.lat);
  const double phi2 = degrees_to_radians(b.lat);
  const double dlam = degrees_to_radians(b.lon - a.lon);
  const double c = std::sin(phi1) * std::sin(phi2) +
                   std::cos(phi1) * std::cos(phi2) * std::cos(dlam);
  if (std::abs(c) > 1.0 + 1e-9)
    throw InternalError("law-of-cosines cosine out of range: " + std::to_string(c));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace ridgeline
