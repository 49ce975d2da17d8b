#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "ridgeline/eval.hpp"
#include "ridgeline/synth.hpp"
#include "support.hpp"

using namespace ridgeline;
using namespace testsupport;

TEST_CASE("nearest_ridge_distance basics and full-matrix oracle", "[eval]") {
  RidgePointSet ridges;
  ridges.points = {{41.9, -87.6}, {41.7, -87.7}};
  ridges.densities = {1.0, 1.0};
  CHECK(nearest_ridge_distance({41.9, -87.6}, ridges).radians() == 0.0);

  RidgePointSet lone;
  lone.points = {{10.0, 10.0}};
  lone.densities = {1.0};
  CHECK(nearest_ridge_distance({10.5, 10.5}, lone).radians() ==
        haversine_angle({10.5, 10.5}, {10.0, 10.0}));

  std::mt19937_64 eng(31);
  const GeoPointSet incidents = random_cluster(eng, 41.9, -87.6, 0.2, 100);
  RidgePointSet many;
  many.points = random_cluster(eng, 41.9, -87.6, 0.2, 50);
  many.densities.assign(50, 1.0);
  for (const auto& p : incidents) {
    double oracle = std::numeric_limits<double>::infinity();
    for (const auto& r : many.points)
      oracle = std::min(oracle, haversine_angle(p, r));
    CHECK(nearest_ridge_distance(p, many).radians() == oracle);
  }

  CHECK_THROWS_AS(nearest_ridge_distance({0.0, 0.0}, RidgePointSet{}),
                  ParameterError);
}

TEST_CASE("coverage_at counts incidents inside the envelope", "[eval]") {
  RidgePointSet ridges;
  ridges.points = {{0.0, 0.0}};
  ridges.densities = {1.0};

  // 3 incidents at 0.05 mi, 7 at 0.2 mi from the ridge point.
  GeoPointSet incidents;
  const double lon_005 = radians_to_degrees(miles_to_radians(0.05));
  const double lon_02 = radians_to_degrees(miles_to_radians(0.2));
  for (int i = 0; i < 3; ++i) incidents.push_back({0.0, lon_005});
  for (int i = 0; i < 7; ++i) incidents.push_back({0.0, lon_02});

  CHECK(coverage_at(incidents, ridges, Distance::from_miles(0.1)) == 0.3);
  CHECK(coverage_at(incidents, ridges, Distance::from_miles(0.0)) == 0.0);
  CHECK(coverage_at(incidents, ridges, Distance::from_miles(0.5)) == 1.0);
  CHECK(coverage_at({{0.0, lon_005}}, ridges, Distance::from_miles(0.05)) == 1.0);
}

TEST_CASE("confidence_band t-interval matches the frozen hand calculation",
          "[eval]") {
  // Two runs {0.9, 1.0}: mean 0.95, sd 0.05 sqrt(2), t_{0.975, 1} = 12.70620...
  const std::vector<std::vector<double>> runs{{0.9}, {1.0}};
  const auto [low, high] = confidence_band(runs, 0.95, BandMethod::student_t);
  CHECK(low[0] == Catch::Approx(0.3146897631912648).margin(1e-9));
  CHECK(high[0] == 1.0);  // 1.585... clipped into [0, 1]

  const auto [plow, phigh] = confidence_band(runs, 0.95, BandMethod::percentile);
  CHECK(plow[0] == Catch::Approx(0.9025).margin(1e-12));
  CHECK(phigh[0] == Catch::Approx(0.9975).margin(1e-12));

  CHECK_THROWS_AS(confidence_band({{0.5}}, 0.95), ParameterError);
}

TEST_CASE("confidence_band has zero width for identical runs", "[eval]") {
  const std::vector<double> row{0.1, 0.4, 0.9};
  const std::vector<std::vector<double>> runs{row, row, row, row};
  const auto [low, high] = confidence_band(runs);
  for (std::size_t c = 0; c < row.size(); ++c) {
    CHECK(low[c] == row[c]);
    CHECK(high[c] == row[c]);
  }
}

TEST_CASE("confidence_band stays inside [0, 1]", "[eval]") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> runs(3, std::vector<double>(20));
  for (auto& row : runs)
    for (auto& x : row) x = u(eng);
  for (auto method : {BandMethod::student_t, BandMethod::percentile}) {
    const auto [low, high] = confidence_band(runs, 0.95, method);
    for (std::size_t c = 0; c < 20; ++c) {
      CHECK(low[c] >= 0.0);
      CHECK(high[c] <= 1.0);
      CHECK(low[c] <= high[c]);
    }
  }
}

TEST_CASE("iteration_stats quantiles agree with a sort-based oracle", "[eval]") {
  const std::vector<int> iters{9, 3, 7, 5, 11, 2, 8};
  const IterationStats s = iteration_stats(iters);
  std::vector<double> sorted(iters.begin(), iters.end());
  std::sort(sorted.begin(), sorted.end());
  CHECK(s.min == sorted.front());
  CHECK(s.max == sorted.back());
  CHECK(s.median == sorted[3]);
  // Inclusive linear interpolation at h = q (n - 1).
  CHECK(s.q1 == Catch::Approx(sorted[1] + 0.5 * (sorted[2] - sorted[1])));
  CHECK(s.q3 == Catch::Approx(sorted[4] + 0.5 * (sorted[5] - sorted[4])));
  CHECK(s.min <= s.q1);
  CHECK(s.q1 <= s.median);
  CHECK(s.median <= s.q3);
  CHECK(s.q3 <= s.max);
}

TEST_CASE("coverage_curve on a compact cluster scene", "[eval]") {
  FilamentSpec spec;
  spec.kind = FilamentKind::gaussian_cloud;
  spec.center_lat = 0.0;
  spec.center_lon = 0.0;
  spec.noise_sigma = 5e-4;
  spec.n = 300;
  spec.seed = 3;
  const GeoPointSet train = generate(spec);
  spec.seed = 4;
  const GeoPointSet test = generate(spec);

  // Scene diameter in miles bounds the radius needed for full coverage.
  double diameter_rad = 0.0;
  for (const auto& a : test)
    for (const auto& b : train)
      diameter_rad = std::max(diameter_rad, haversine_angle(a, b));

  ScmsConfig cfg;
  cfg.bandwidth = Bandwidth::from_radians(5e-4);
  cfg.convergence_degrees = 1e-3;
  cfg.mesh_size = 150;
  cfg.max_iterations = 120;
  cfg.threads = 2;

  std::vector<double> radii;
  for (double r = 0.005; r <= 0.1; r += 0.005) radii.push_back(r);
  radii.push_back(radians_to_miles(diameter_rad));

  EvalOptions opts;
  opts.train_sample = 200;
  opts.base_seed = 9;
  const auto [curve, iters] = coverage_curve(train, test, cfg, 4, radii, opts);

  REQUIRE(curve.per_run.size() == 4);
  REQUIRE(curve.radii_miles.size() == radii.size());
  for (const auto& row : curve.per_run) {
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] >= row[c - 1]);
    CHECK(row.back() == 1.0);
  }
  for (std::size_t c = 0; c < radii.size(); ++c) {
    CHECK(curve.ci_low[c] <= curve.mean[c] + 1e-15);
    CHECK(curve.mean[c] <= curve.ci_high[c] + 1e-15);
  }
  CHECK(iters.per_run_iterations.size() == 4);
  CHECK(iters.min <= iters.median);

  SECTION("shared run seeds give identical rows and a zero-width band") {
    EvalOptions shared = opts;
    shared.run_seeds = {42, 42, 42, 42};
    const auto [c2, it2] = coverage_curve(train, test, cfg, 4, radii, shared);
    for (int r = 1; r < 4; ++r)
      for (std::size_t c = 0; c < radii.size(); ++c)
        CHECK(c2.per_run[r][c] == c2.per_run[0][c]);
    for (std::size_t c = 0; c < radii.size(); ++c)
      CHECK(c2.ci_high[c] - c2.ci_low[c] == 0.0);
  }
}

TEST_CASE("coverage_curve validates inputs", "[eval]") {
  const GeoPointSet pts{{0.0, 0.0}, {0.0, 0.1}};
  ScmsConfig cfg;
  CHECK_THROWS_AS(coverage_curve(pts, pts, cfg, 1, {0.1}), ParameterError);
  CHECK_THROWS_AS(coverage_curve(pts, pts, cfg, 2, {}), ParameterError);
  CHECK_THROWS_AS(coverage_curve(pts, pts, cfg, 2, {0.2, 0.1}), ParameterError);
  EvalOptions opts;
  opts.run_seeds = {1, 2, 3};
  CHECK_THROWS_AS(coverage_curve(pts, pts, cfg, 2, {0.1}, opts), ParameterError);
}
