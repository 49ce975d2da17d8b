#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ridgeline/density.hpp"
#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/linalg.hpp"
#include "ridgeline/parallel.hpp"
#include "ridgeline/rng.hpp"
#include "ridgeline/stats.hpp"

namespace ridgeline {

// Kernel mass below this is treated as "no data in reach": the mesh point is
// stranded and dropped. Also keeps the Hessian accumulators out of denormal
// territory.
inline constexpr double kStrandedWeightFloor = 1e-150;

struct ScmsConfig {
  int neighbors = 10;                     // k for the automatic bandwidth
  std::optional<Bandwidth> bandwidth;     // overrides knn_bandwidth when set
  double convergence_degrees = 0.01;      // c of the per-point stop criterion
  std::optional<double> percentage;       // top-density cut, [0, 100]
  std::optional<std::size_t> mesh_size;   // defaults to |data|
  double threshold_quantile = 0.5;        // mesh density cut level
  int max_iterations = 500;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct RidgePointSet {
  GeoPointSet points;
  std::vector<double> densities;  // KDE at each point under the fitting model
};

struct ScmsResult {
  RidgePointSet ridges;        // after the percentage cut when one is set
  std::size_t pre_cut_size = 0;
  int iterations_run = 0;      // max over per-point iteration counts
  // Diagnostics below are aligned with the pre-cut ridge set.
  std::vector<int> per_point_iterations;
  std::vector<bool> per_point_converged;
  Bandwidth bandwidth_used;
  double threshold_used = 0.0;
  std::size_t discarded_mesh_count = 0;  // threshold drops + stranded drops
  std::size_t stranded_count = 0;
  bool percentage_empty_warning = false;
};

// mesh_size points i.i.d. uniform over the axis-aligned bounding box of the
// data, deterministic in seed (latitude drawn before longitude per point).
inline GeoPointSet init_mesh(const GeoPointSet& data, std::size_t mesh_size,
                             std::uint64_t seed) {
  if (data.empty()) throw ParameterError("init_mesh: empty data");
  if (mesh_size == 0) throw ParameterError("init_mesh: mesh_size must be >= 1");
  validate(data);
  double lat_lo = data[0].lat, lat_hi = data[0].lat;
  double lon_lo = data[0].lon, lon_hi = data[0].lon;
  for (const auto& p : data) {
    lat_lo = std::min(lat_lo, p.lat);
    lat_hi = std::max(lat_hi, p.lat);
    lon_lo = std::min(lon_lo, p.lon);
    lon_hi = std::max(lon_hi, p.lon);
  }
  if (lat_lo == lat_hi && lon_lo == lon_hi)
    throw DegenerateDataError("init_mesh: all data points identical");
  Rng rng(seed);
  GeoPointSet mesh(mesh_size);
  for (auto& p : mesh) {
    p.lat = rng.uniform(lat_lo, lat_hi);
    p.lon = rng.uniform(lon_lo, lon_hi);
  }
  return mesh;
}

// Computes tau as the given quantile of mesh densities and retains mesh
// points with density >= tau. Returns survivors and tau.
inline std::pair<GeoPointSet, double> threshold_mesh(const GeoPointSet& mesh,
                                                     const DensityModel& model,
                                                     double threshold_quantile,
                                                     int threads = 1) {
  if (mesh.empty()) throw ParameterError("threshold_mesh: empty mesh");
  if (!(threshold_quantile >= 0.0 && threshold_quantile <= 1.0))
    throw ParameterError("threshold_quantile outside [0, 1]");
  std::vector<double> dens(mesh.size());
  parallel_for(mesh.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) dens[i] = model.density(mesh[i]);
  });
  const double tau = quantile(dens, threshold_quantile);
  GeoPointSet kept;
  kept.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i)
    if (dens[i] >= tau) kept.push_back(mesh[i]);
  if (kept.empty())
    throw DegenerateDataError("threshold_mesh: no mesh point has density >= " +
                              std::to_string(tau));
  return {std::move(kept), tau};
}

namespace detail {

struct RadiansStep {
  double lat = 0.0, lon = 0.0;  // updated position
  Vec2 shift;                   // projected mean-shift displacement
  bool stranded = false;
};

// One subspace-constrained mean-shift update in radian coordinates:
// Gaussian kernel weights over the haversine metric, coordinate-space
// mean shift, and the kernel-weighted Hessian
//   H = (1/n) sum_j sigma_j (mu_j mu_j^T - I / beta^2),  mu_j = (psi - theta_j)/beta^2,
// whose smallest-eigenvalue direction carries the update.
inline RadiansStep scms_step_radians(double phi, double lam,
                                     const DensityModel& model) {
  const auto& dphi = model.lat_radians();
  const auto& dlam = model.lon_radians();
  const auto& dcos = model.cos_lat();
  const std::size_t n = dphi.size();
  const double beta = model.bandwidth().rad;
  const double b2 = beta * beta;
  const double inv2b2 = 1.0 / (2.0 * b2);
  const double cphi = std::cos(phi);

  double s0 = 0.0, s_lat = 0.0, s_lon = 0.0;
  double m00 = 0.0, m01 = 0.0, m11 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double sp = std::sin((phi - dphi[j]) * 0.5);
    const double sl = std::sin((lam - dlam[j]) * 0.5);
    const double a = std::clamp(sp * sp + cphi * dcos[j] * sl * sl, 0.0, 1.0);
    const double u = 2.0 * std::asin(std::sqrt(a));
    const double w = std::exp(-u * u * inv2b2);
    s0 += w;
    s_lat += w * dphi[j];
    s_lon += w * dlam[j];
    const double d_lat = phi - dphi[j];
    const double d_lon = lam - dlam[j];
    m00 += w * d_lat * d_lat;
    m01 += w * d_lat * d_lon;
    m11 += w * d_lon * d_lon;
  }

  RadiansStep out;
  if (!(s0 > kStrandedWeightFloor)) {
    out.stranded = true;
    out.lat = phi;
    out.lon = lam;
    return out;
  }

  const double inv_nb4 = 1.0 / (static_cast<double>(n) * b2 * b2);
  const double diag = s0 / (static_cast<double>(n) * b2);
  const SymMat2 hess{m00 * inv_nb4 - diag, m01 * inv_nb4, m11 * inv_nb4 - diag};
  const Vec2 mean_shift{s_lat / s0 - phi, s_lon / s0 - lam};

  const Eigen2 eig = eigen_sym2(hess);
  Vec2 dir = eig.v_min;
  if (eig.tie) {
    // Isotropic Hessian: the projection direction is undefined, so take the
    // full mean-shift step along the displacement itself.
    const double mn = mean_shift.norm();
    if (mn == 0.0) {
      out.lat = phi;
      out.lon = lam;
      return out;
    }
    dir = mean_shift * (1.0 / mn);
  }
  out.shift = dir * dir.dot(mean_shift);
  out.lat = phi + out.shift.lat;
  out.lon = lam + out.shift.lon;
  return out;
}

}  // namespace detail

struct ScmsStep {
  GeoPoint point;  // updated position
  Vec2 shift;      // projected displacement, radians
};

// Single public update; nullopt when the point is stranded (kernel mass
// below the floor). Callers drop stranded points and count them.
inline std::optional<ScmsStep> scms_update(const GeoPoint& point,
                                           const DensityModel& model) {
  validate(point);
  const auto step = detail::scms_step_radians(degrees_to_radians(point.lat),
                                              degrees_to_radians(point.lon), model);
  if (step.stranded) return std::nullopt;
  return ScmsStep{{radians_to_degrees(step.lat), radians_to_degrees(step.lon)},
                  step.shift};
}

// Keeps the ridge points whose density lies in the top floor(p% |psi|)
// values; gamma is the smallest density among that top set. p = 0 returns an
// empty set and raises the warning flag instead of erroring.
inline RidgePointSet percentile_cut(const RidgePointSet& ridges,
                                    const DensityModel& model, double percentage,
                                    bool* empty_warning = nullptr) {
  if (ridges.points.empty()) throw ParameterError("percentile_cut: empty ridge set");
  if (!(percentage >= 0.0 && percentage <= 100.0))
    throw ParameterError("percentage outside [0, 100]");
  if (empty_warning) *empty_warning = false;
  std::vector<double> dens(ridges.points.size());
  for (std::size_t i = 0; i < dens.size(); ++i)
    dens[i] = model.density(ridges.points[i]);
  const std::size_t keep = static_cast<std::size_t>(
      std::floor(percentage / 100.0 * static_cast<double>(dens.size())));
  if (keep == 0) {
    if (empty_warning) *empty_warning = true;
    return {};
  }
  std::vector<double> sorted(dens);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double gamma = sorted[keep - 1];
  RidgePointSet out;
  out.points.reserve(keep);
  out.densities.reserve(keep);
  for (std::size_t i = 0; i < dens.size(); ++i) {
    if (dens[i] >= gamma) {
      out.points.push_back(ridges.points[i]);
      out.densities.push_back(ridges.densities.empty() ? dens[i]
                                                       : ridges.densities[i]);
    }
  }
  return out;
}

// Full pipeline: bandwidth (k-NN unless overridden), uniform mesh over the
// data's bounding box, density thresholding, then independent per-point
// iteration until the successive-update difference drops to the convergence
// threshold or max_iterations is hit. Deterministic in (data, config) for
// any thread count.
inline ScmsResult run_scms(const GeoPointSet& data, const ScmsConfig& config) {
  if (data.size() < 2) throw ParameterError("run_scms needs at least 2 points");
  if (!(config.convergence_degrees > 0.0))
    throw ParameterError("convergence threshold must be positive");
  if (config.max_iterations < 1)
    throw ParameterError("max_iterations must be >= 1");
  if (config.percentage && !(*config.percentage >= 0.0 && *config.percentage <= 100.0))
    throw ParameterError("percentage outside [0, 100]");
  if (config.threads < 1) throw ParameterError("threads must be >= 1");

  ScmsResult result;
  result.bandwidth_used =
      config.bandwidth ? *config.bandwidth
                       : knn_bandwidth(data, config.neighbors, config.threads);
  validate(result.bandwidth_used);
  DensityModel model(data, result.bandwidth_used);

  const std::size_t mesh_size = config.mesh_size.value_or(data.size());
  GeoPointSet mesh = init_mesh(data, mesh_size, config.seed);
  auto [survivors, tau] =
      threshold_mesh(mesh, model, config.threshold_quantile, config.threads);
  result.threshold_used = tau;

  const std::size_t m = survivors.size();
  const double c_rad = degrees_to_radians(config.convergence_degrees);

  std::vector<double> fin_lat(m), fin_lon(m);
  std::vector<int> iters(m, 0);
  std::vector<unsigned char> converged(m, 0), stranded(m, 0);

  parallel_for(m, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double lat = degrees_to_radians(survivors[i].lat);
      double lon = degrees_to_radians(survivors[i].lon);
      Vec2 prev_shift;
      bool has_prev = false;
      for (int it = 1; it <= config.max_iterations; ++it) {
        const auto step = detail::scms_step_radians(lat, lon, model);
        if (step.stranded) {
          stranded[i] = 1;
          break;
        }
        lat = step.lat;
        lon = step.lon;
        iters[i] = it;
        if (has_prev && (step.shift - prev_shift).norm() <= c_rad) {
          converged[i] = 1;
          break;
        }
        prev_shift = step.shift;
        has_prev = true;
      }
      fin_lat[i] = lat;
      fin_lon[i] = lon;
    }
  });

  RidgePointSet pre_cut;
  for (std::size_t i = 0; i < m; ++i) {
    if (stranded[i]) {
      ++result.stranded_count;
      continue;
    }
    pre_cut.points.push_back(
        {radians_to_degrees(fin_lat[i]), radians_to_degrees(fin_lon[i])});
    result.per_point_iterations.push_back(iters[i]);
    result.per_point_converged.push_back(converged[i] != 0);
    result.iterations_run = std::max(result.iterations_run, iters[i]);
  }
  if (pre_cut.points.empty())
    throw DegenerateDataError("run_scms: every mesh point was stranded");

  pre_cut.densities.resize(pre_cut.points.size());
  parallel_for(pre_cut.points.size(), config.threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i)
                   pre_cut.densities[i] = model.density(pre_cut.points[i]);
               });

  result.pre_cut_size = pre_cut.points.size();
  result.discarded_mesh_count = (mesh.size() - m) + result.stranded_count;
  if (config.percentage) {
    result.ridges = percentile_cut(pre_cut, model, *config.percentage,
                                   &result.percentage_empty_warning);
  } else {
    result.ridges = std::move(pre_cut);
  }
  return result;
}

}  // namespace ridgeline
