#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/linalg.hpp"
#include "ridgeline/rng.hpp"

namespace ridgeline {

enum class FilamentKind { line_segment, circle_arc, gaussian_cloud, cross };

inline std::string to_string(FilamentKind k) {
  switch (k) {
    case FilamentKind::line_segment: return "line-segment";
    case FilamentKind::circle_arc: return "circle-arc";
    case FilamentKind::gaussian_cloud: return "gaussian-cloud";
    case FilamentKind::cross: return "cross";
  }
  return "?";
}

inline FilamentKind filament_kind_from_string(const std::string& s) {
  if (s == "line-segment" || s == "line") return FilamentKind::line_segment;
  if (s == "circle-arc" || s == "circle") return FilamentKind::circle_arc;
  if (s == "gaussian-cloud" || s == "cloud") return FilamentKind::gaussian_cloud;
  if (s == "cross") return FilamentKind::cross;
  throw ParameterError("unknown filament kind: " + s);
}

// Synthetic filament scene. All geometry lives in the local (lat, lon)
// radian chart; the generator converts to degrees at the boundary. Noise is
// isotropic Gaussian in the chart.
struct FilamentSpec {
  FilamentKind kind = FilamentKind::line_segment;
  // line-segment endpoints (radians)
  double lat0 = 0.0, lon0 = 0.0, lat1 = 0.0, lon1 = 0.0;
  // circle-arc / gaussian-cloud / cross center (radians)
  double center_lat = 0.0, center_lon = 0.0;
  double radius = 0.0;                  // circle-arc
  double arc_start = 0.0, arc_end = 2.0 * kPi;  // chart angle from the +lat axis
  double half_length = 0.0;             // cross arm half length
  double noise_sigma = 0.0;             // radians
  std::size_t n = 1;
  std::uint64_t seed = 1;
};

inline void validate(const FilamentSpec& spec) {
  if (spec.n < 1) throw ParameterError("filament spec: n must be >= 1");
  if (!(spec.noise_sigma >= 0.0))
    throw ParameterError("filament spec: noise_sigma must be >= 0");
  if (spec.kind == FilamentKind::circle_arc && !(spec.radius > 0.0))
    throw ParameterError("filament spec: circle-arc needs radius > 0");
  if (spec.kind == FilamentKind::circle_arc && !(spec.arc_end > spec.arc_start))
    throw ParameterError("filament spec: arc_end must exceed arc_start");
  if (spec.kind == FilamentKind::cross && !(spec.half_length > 0.0))
    throw ParameterError("filament spec: cross needs half_length > 0");
}

// n points on the parametric curve plus chart-space Gaussian noise,
// deterministic in seed. Per point: position draw(s) first, then one
// Box-Muller pair for the noise.
inline GeoPointSet generate(const FilamentSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  GeoPointSet out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double lat = 0.0, lon = 0.0;
    switch (spec.kind) {
      case FilamentKind::line_segment: {
        const double t = rng.uniform01();
        lat = spec.lat0 + t * (spec.lat1 - spec.lat0);
        lon = spec.lon0 + t * (spec.lon1 - spec.lon0);
        break;
      }
      case FilamentKind::circle_arc: {
        const double t = rng.uniform(spec.arc_start, spec.arc_end);
        lat = spec.center_lat + spec.radius * std::cos(t);
        lon = spec.center_lon + spec.radius * std::sin(t);
        break;
      }
      case FilamentKind::gaussian_cloud: {
        lat = spec.center_lat;
        lon = spec.center_lon;
        break;
      }
      case FilamentKind::cross: {
        const bool lat_arm = rng.uniform_index(2) == 0;
        const double t = rng.uniform(-spec.half_length, spec.half_length);
        lat = spec.center_lat + (lat_arm ? t : 0.0);
        lon = spec.center_lon + (lat_arm ? 0.0 : t);
        break;
      }
    }
    const auto [g1, g2] = rng.gaussian_pair();
    lat += spec.noise_sigma * g1;
    lon += spec.noise_sigma * g2;
    GeoPoint p{radians_to_degrees(lat), radians_to_degrees(lon)};
    validate(p);
    out.push_back(p);
  }
  return out;
}

namespace detail {

inline double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

}  // namespace detail

// Chart-space distance from a point to the spec's noiseless curve.
inline Distance true_curve_distance(const GeoPoint& p, const FilamentSpec& spec) {
  validate(spec);
  validate(p);
  const Vec2 q{degrees_to_radians(p.lat), degrees_to_radians(p.lon)};
  switch (spec.kind) {
    case FilamentKind::line_segment:
      return Distance::from_radians(detail::segment_distance(
          q, {spec.lat0, spec.lon0}, {spec.lat1, spec.lon1}));
    case FilamentKind::circle_arc: {
      const Vec2 d = q - Vec2{spec.center_lat, spec.center_lon};
      const double r = d.norm();
      if (spec.arc_end - spec.arc_start >= 2.0 * kPi)
        return Distance::from_radians(std::abs(r - spec.radius));
      double ang = std::atan2(d.lon, d.lat);  // chart angle from the +lat axis
      // Shift by whole turns into [arc_start, arc_start + 2 pi).
      ang += 2.0 * kPi * std::ceil((spec.arc_start - ang) / (2.0 * kPi));
      if (ang <= spec.arc_end) return Distance::from_radians(std::abs(r - spec.radius));
      const Vec2 e0{spec.center_lat + spec.radius * std::cos(spec.arc_start),
                    spec.center_lon + spec.radius * std::sin(spec.arc_start)};
      const Vec2 e1{spec.center_lat + spec.radius * std::cos(spec.arc_end),
                    spec.center_lon + spec.radius * std::sin(spec.arc_end)};
      return Distance::from_radians(std::min((q - e0).norm(), (q - e1).norm()));
    }
    case FilamentKind::gaussian_cloud:
      return Distance::from_radians(
          (q - Vec2{spec.center_lat, spec.center_lon}).norm());
    case FilamentKind::cross: {
      const Vec2 c{spec.center_lat, spec.center_lon};
      const double d_lat_arm = detail::segment_distance(
          q, c - Vec2{spec.half_length, 0.0}, c + Vec2{spec.half_length, 0.0});
      const double d_lon_arm = detail::segment_distance(
          q, c - Vec2{0.0, spec.half_length}, c + Vec2{0.0, spec.half_length});
      return Distance::from_radians(std::min(d_lat_arm, d_lon_arm));
    }
  }
  throw ParameterError("unsupported filament kind");
}

}  // namespace ridgeline
