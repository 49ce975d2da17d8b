#pragma once

// Shared test helpers: independent finite-difference and brute-force oracles,
// random generators with fixed seeds, and scene builders. Oracles here must
// stay independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ridgeline/ridgeline.hpp"

namespace testsupport {

using namespace ridgeline;

// Central finite differences of the KDE value, step in radians.
inline Vec2 fd_gradient(const DensityModel& model, double phi, double lam,
                        double h = 1e-6) {
  return {(model.density_radians(phi + h, lam) - model.density_radians(phi - h, lam)) /
              (2.0 * h),
          (model.density_radians(phi, lam + h) - model.density_radians(phi, lam - h)) /
              (2.0 * h)};
}

// Central finite differences of the analytic gradient.
inline SymMat2 fd_hessian(const DensityModel& model, double phi, double lam,
                          double h = 1e-6) {
  const Vec2 gp_lat = model.gradient_radians(phi + h, lam);
  const Vec2 gm_lat = model.gradient_radians(phi - h, lam);
  const Vec2 gp_lon = model.gradient_radians(phi, lam + h);
  const Vec2 gm_lon = model.gradient_radians(phi, lam - h);
  const double h00 = (gp_lat.lat - gm_lat.lat) / (2.0 * h);
  const double h11 = (gp_lon.lon - gm_lon.lon) / (2.0 * h);
  const double h01a = (gp_lon.lat - gm_lon.lat) / (2.0 * h);
  const double h01b = (gp_lat.lon - gm_lat.lon) / (2.0 * h);
  return {h00, 0.5 * (h01a + h01b), h11};
}

// Brute-force k-NN bandwidth: full pairwise matrix, row sort, average of the
// k smallest off-diagonal entries, averaged over rows.
inline double knn_bandwidth_oracle(const GeoPointSet& data, int k) {
  const std::size_t n = data.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(haversine_angle(data[i], data[j]));
    std::sort(row.begin(), row.end());
    for (int m = 0; m < k; ++m) total += row[m];
  }
  return total / (static_cast<double>(k) * static_cast<double>(n));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(const Vec2& got, const Vec2& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline double rel_err(const SymMat2& got, const SymMat2& want) {
  return (got - want).frobenius() / std::max(want.frobenius(), 1e-300);
}

// Random dataset around a center, chart-uniform square of half-width spread.
inline GeoPointSet random_cluster(std::mt19937_64& eng, double center_lat_deg,
                                  double center_lon_deg, double spread_deg,
                                  std::size_t n) {
  std::uniform_real_distribution<double> u(-spread_deg, spread_deg);
  GeoPointSet pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back({center_lat_deg + u(eng), center_lon_deg + u(eng)});
  return pts;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& contents) {
    path = std::filesystem::temp_directory_path() /
           ("ridgeline_test_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  std::string str() const { return path.string(); }
};

}  // namespace testsupport
