#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ridgeline/density.hpp"
#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/parallel.hpp"
#include "ridgeline/rng.hpp"
#include "ridgeline/scms.hpp"
#include "ridgeline/stats.hpp"

namespace ridgeline {

struct CoverageCurve {
  std::vector<double> radii_miles;
  std::vector<std::vector<double>> per_run;  // [runs][radii], each row nondecreasing
  std::vector<double> mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

struct IterationStats {
  std::vector<int> per_run_iterations;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

inline IterationStats iteration_stats(std::vector<int> per_run) {
  if (per_run.empty()) throw ParameterError("iteration_stats: empty input");
  IterationStats s;
  s.per_run_iterations = per_run;
  std::vector<double> v(per_run.begin(), per_run.end());
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.q1 = quantile_sorted(v, 0.25);
  s.median = quantile_sorted(v, 0.5);
  s.q3 = quantile_sorted(v, 0.75);
  s.max = v.back();
  return s;
}

inline Distance nearest_ridge_distance(const GeoPoint& incident,
                                       const RidgePointSet& ridges) {
  if (ridges.points.empty())
    throw ParameterError("nearest_ridge_distance: empty ridge set");
  double best = haversine_angle(incident, ridges.points[0]);
  for (std::size_t i = 1; i < ridges.points.size(); ++i)
    best = std::min(best, haversine_angle(incident, ridges.points[i]));
  return Distance::from_radians(best);
}

// Fraction of incidents whose nearest ridge point lies within radius.
inline double coverage_at(const GeoPointSet& incidents, const RidgePointSet& ridges,
                          Distance radius) {
  if (incidents.empty()) throw ParameterError("coverage_at: empty incident set");
  if (!(radius.radians() >= 0.0)) throw ParameterError("coverage_at: negative radius");
  std::size_t hit = 0;
  for (const auto& p : incidents)
    if (nearest_ridge_distance(p, ridges).radians() <= radius.radians()) ++hit;
  return static_cast<double>(hit) / static_cast<double>(incidents.size());
}

enum class BandMethod { student_t, percentile };

// Per-radius confidence bounds across runs, clipped to [0, 1].
// student_t: mean +- t_{(1+level)/2, runs-1} * sd / sqrt(runs).
// percentile: empirical (1 -+ level)/2 quantiles.
inline std::pair<std::vector<double>, std::vector<double>> confidence_band(
    const std::vector<std::vector<double>>& per_run, double level = 0.95,
    BandMethod method = BandMethod::student_t) {
  if (per_run.size() < 2)
    throw ParameterError("confidence_band needs at least 2 runs");
  const std::size_t cols = per_run[0].size();
  for (const auto& row : per_run)
    if (row.size() != cols) throw ParameterError("confidence_band: ragged rows");
  std::vector<double> low(cols), high(cols);
  const int runs = static_cast<int>(per_run.size());
  std::vector<double> col(per_run.size());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < per_run.size(); ++r) col[r] = per_run[r][c];
    double lo, hi;
    if (method == BandMethod::student_t) {
      const double m = mean(col);
      const double half = t_critical(level, runs - 1) * sample_sd(col) /
                          std::sqrt(static_cast<double>(runs));
      lo = m - half;
      hi = m + half;
    } else {
      std::sort(col.begin(), col.end());
      lo = quantile_sorted(col, (1.0 - level) / 2.0);
      hi = quantile_sorted(col, (1.0 + level) / 2.0);
    }
    low[c] = std::clamp(lo, 0.0, 1.0);
    high[c] = std::clamp(hi, 0.0, 1.0);
  }
  return {std::move(low), std::move(high)};
}

struct EvalOptions {
  std::size_t train_sample = 0;  // per-run training subsample; 0 = use all
  std::size_t test_sample = 0;   // drawn once per evaluation; 0 = use all
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> run_seeds;  // optional override, one per run
  BandMethod band = BandMethod::student_t;
  double level = 0.95;
};

namespace detail {

inline GeoPointSet subsample_points(const GeoPointSet& points, std::size_t n,
                                    std::uint64_t seed) {
  if (n == 0 || n >= points.size()) return points;
  Rng rng(seed);
  const auto idx = sample_without_replacement(points.size(), n, rng);
  GeoPointSet out;
  out.reserve(n);
  for (auto i : idx) out.push_back(points[i]);
  return out;
}

}  // namespace detail

// Multi-run envelope-coverage evaluation: per run, subsample the training
// set, fit ridges, and sweep every radius against the fixed test subsample.
// The test subsample is drawn once (seed = base_seed) so the band reflects
// training variation only; run r trains with seed base_seed + 1 + r unless
// run_seeds overrides it.
inline std::pair<CoverageCurve, IterationStats> coverage_curve(
    const GeoPointSet& train, const GeoPointSet& test, const ScmsConfig& config,
    int runs, const std::vector<double>& radii_miles, const EvalOptions& opts = {}) {
  if (runs < 2) throw ParameterError("coverage_curve needs runs >= 2");
  if (radii_miles.empty()) throw ParameterError("coverage_curve: empty radius list");
  if (!std::is_sorted(radii_miles.begin(), radii_miles.end()))
    throw ParameterError("coverage_curve: radii must be sorted ascending");
  if (train.empty() || test.empty())
    throw ParameterError("coverage_curve: empty train or test set");
  if (!opts.run_seeds.empty() &&
      opts.run_seeds.size() != static_cast<std::size_t>(runs))
    throw ParameterError("coverage_curve: run_seeds size must equal runs");

  const GeoPointSet test_set =
      detail::subsample_points(test, opts.test_sample, opts.base_seed);

  CoverageCurve curve;
  curve.radii_miles = radii_miles;
  curve.per_run.resize(runs);
  std::vector<int> iters(runs);

  for (int r = 0; r < runs; ++r) {
    const std::uint64_t seed =
        opts.run_seeds.empty() ? opts.base_seed + 1 + static_cast<std::uint64_t>(r)
                               : opts.run_seeds[r];
    const GeoPointSet train_r =
        detail::subsample_points(train, opts.train_sample, seed);
    ScmsConfig cfg = config;
    cfg.seed = seed;
    const ScmsResult fit = run_scms(train_r, cfg);
    iters[r] = fit.iterations_run;

    std::vector<double> nearest(test_set.size());
    parallel_for(test_set.size(), config.threads,
                 [&](std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i)
                     nearest[i] =
                         nearest_ridge_distance(test_set[i], fit.ridges).radians();
                 });
    std::sort(nearest.begin(), nearest.end());
    auto& row = curve.per_run[r];
    row.reserve(radii_miles.size());
    for (double mi : radii_miles) {
      const double rad = miles_to_radians(mi);
      const auto covered =
          std::upper_bound(nearest.begin(), nearest.end(), rad) - nearest.begin();
      row.push_back(static_cast<double>(covered) /
                    static_cast<double>(test_set.size()));
    }
  }

  curve.mean.resize(radii_miles.size());
  for (std::size_t c = 0; c < radii_miles.size(); ++c) {
    double s = 0.0;
    for (int r = 0; r < runs; ++r) s += curve.per_run[r][c];
    curve.mean[c] = s / runs;
  }
  std::tie(curve.ci_low, curve.ci_high) =
      confidence_band(curve.per_run, opts.level, opts.band);
  return {std::move(curve), iteration_stats(std::move(iters))};
}

}  // namespace ridgeline
