#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "ridgeline/errors.hpp"
#include "ridgeline/eval.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/scms.hpp"

namespace ridgeline {

// Shortest round-trip decimal form; locale-independent, '.' separator.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw InternalError("to_chars failed");
  return std::string(buf, res.ptr);
}

inline void write_ridges_csv(std::ostream& out, const RidgePointSet& ridges) {
  out << "lat,lon,density\n";
  for (std::size_t i = 0; i < ridges.points.size(); ++i) {
    out << format_double(ridges.points[i].lat) << ','
        << format_double(ridges.points[i].lon) << ','
        << format_double(ridges.densities[i]) << '\n';
  }
}

inline void write_ridges_csv(const std::string& path, const RidgePointSet& ridges) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write: " + path);
  write_ridges_csv(out, ridges);
  if (!out) throw IngestError("write failed: " + path);
}

// GeoJSON uses [lon, lat] coordinate order (the CSV writer uses lat,lon).
inline void write_ridges_geojson(std::ostream& out, const RidgePointSet& ridges) {
  nlohmann::json coords = nlohmann::json::array();
  nlohmann::json densities = nlohmann::json::array();
  for (std::size_t i = 0; i < ridges.points.size(); ++i) {
    coords.push_back({ridges.points[i].lon, ridges.points[i].lat});
    densities.push_back(ridges.densities[i]);
  }
  const nlohmann::json doc = {
      {"type", "FeatureCollection"},
      {"features",
       {{{"type", "Feature"},
         {"geometry", {{"type", "MultiPoint"}, {"coordinates", coords}}},
         {"properties", {{"densities", densities}}}}}}};
  out << doc.dump(2) << '\n';
}

inline void write_ridges_geojson(const std::string& path,
                                 const RidgePointSet& ridges) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write: " + path);
  write_ridges_geojson(out, ridges);
  if (!out) throw IngestError("write failed: " + path);
}

inline void write_coverage_csv(std::ostream& out, const CoverageCurve& curve) {
  out << "radius_miles,mean_coverage,ci_low,ci_high";
  for (std::size_t r = 0; r < curve.per_run.size(); ++r) out << ",run_" << r;
  out << '\n';
  for (std::size_t c = 0; c < curve.radii_miles.size(); ++c) {
    out << format_double(curve.radii_miles[c]) << ','
        << format_double(curve.mean[c]) << ',' << format_double(curve.ci_low[c])
        << ',' << format_double(curve.ci_high[c]);
    for (std::size_t r = 0; r < curve.per_run.size(); ++r)
      out << ',' << format_double(curve.per_run[r][c]);
    out << '\n';
  }
}

inline void write_coverage_csv(const std::string& path, const CoverageCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write: " + path);
  write_coverage_csv(out, curve);
  if (!out) throw IngestError("write failed: " + path);
}

inline void write_iterations_csv(std::ostream& out, const IterationStats& stats) {
  out << "run,iterations\n";
  for (std::size_t r = 0; r < stats.per_run_iterations.size(); ++r)
    out << r << ',' << stats.per_run_iterations[r] << '\n';
}

inline void write_iterations_csv(const std::string& path,
                                 const IterationStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write: " + path);
  write_iterations_csv(out, stats);
  if (!out) throw IngestError("write failed: " + path);
}

inline void write_points_csv(std::ostream& out, const GeoPointSet& points) {
  out << "lat,lon\n";
  for (const auto& p : points)
    out << format_double(p.lat) << ',' << format_double(p.lon) << '\n';
}

inline void write_points_csv(const std::string& path, const GeoPointSet& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write: " + path);
  write_points_csv(out, points);
  if (!out) throw IngestError("write failed: " + path);
}

}  // namespace ridgeline
