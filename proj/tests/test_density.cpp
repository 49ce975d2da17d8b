#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ridgeline/density.hpp"
#include "support.hpp"

using namespace ridgeline;
using namespace testsupport;

TEST_CASE("knn bandwidth of two points is their separation", "[density]") {
  const GeoPointSet pts{{41.88, -87.63}, {41.90, -87.60}};
  const Bandwidth bw = knn_bandwidth(pts, 1);
  CHECK(bw.radians() == Catch::Approx(haversine_angle(pts[0], pts[1])).epsilon(1e-15));
  CHECK(bw.miles() == Catch::Approx(haversine(pts[0], pts[1]).miles()).epsilon(1e-15));
}

TEST_CASE("knn bandwidth matches the brute-force oracle", "[density]") {
  std::mt19937_64 eng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const GeoPointSet pts = random_cluster(eng, 41.9, -87.6, 0.05, 5);
    const Bandwidth bw = knn_bandwidth(pts, 2);
    CHECK(bw.radians() == Catch::Approx(knn_bandwidth_oracle(pts, 2)).epsilon(1e-13));
  }
  // Larger set, parallel path bit-identical to serial.
  const GeoPointSet pts = random_cluster(eng, 10.0, 20.0, 0.2, 60);
  CHECK(knn_bandwidth(pts, 7, 1).radians() == knn_bandwidth(pts, 7, 4).radians());
  CHECK(knn_bandwidth(pts, 7).radians() ==
        Catch::Approx(knn_bandwidth_oracle(pts, 7)).epsilon(1e-13));
}

TEST_CASE("knn bandwidth is nondecreasing in k", "[density]") {
  std::mt19937_64 eng(6);
  const GeoPointSet pts = random_cluster(eng, -5.0, 100.0, 0.1, 30);
  double prev = 0.0;
  for (int k = 1; k < 30; ++k) {
    const double b = knn_bandwidth(pts, k).radians();
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("knn bandwidth rejects bad inputs", "[density]") {
  const GeoPointSet pts{{1.0, 1.0}, {1.1, 1.0}, {1.2, 1.0}};
  CHECK_THROWS_AS(knn_bandwidth(pts, 0), ParameterError);
  CHECK_THROWS_AS(knn_bandwidth(pts, 3), ParameterError);
  CHECK_THROWS_AS(knn_bandwidth({{2.0, 3.0}}, 1), ParameterError);
  const GeoPointSet same{{5.0, 5.0}, {5.0, 5.0}, {5.0, 5.0}};
  CHECK_THROWS_AS(knn_bandwidth(same, 2), DegenerateDataError);
  const ScmsConfig defaults;
  CHECK(defaults.neighbors == 10);
}

TEST_CASE("kde at a lone data point equals the kernel normalization", "[density]") {
  const GeoPoint p{41.8781, -87.6298};
  const DensityModel model({p}, Bandwidth::from_radians(0.003));
  // Frozen: 1 / (2 pi 0.003^2) evaluated at 50-digit precision.
  CHECK(model.density(p) == Catch::Approx(17683.8825657661484).epsilon(1e-14));
}

TEST_CASE("kde matches the term-by-term oracle", "[density]") {
  const GeoPointSet data{{41.8781, -87.6298}, {41.9000, -87.6000}, {41.8600, -87.7000}};
  const DensityModel model(data, Bandwidth::from_radians(0.001));
  // Frozen: direct 50-digit evaluation of the kernel sum at this query.
  CHECK(model.density({41.8800, -87.6300}) ==
        Catch::Approx(132286.582285965347).epsilon(1e-12));
}

TEST_CASE("kde decays with distance and never goes negative", "[density]") {
  const GeoPointSet data{{0.0, 0.0}, {0.01, 0.01}};
  const DensityModel model(data, Bandwidth::from_radians(0.001));
  double prev = model.density({0.0, 0.0});
  for (double step : {0.05, 0.2, 1.0, 10.0, 100.0}) {
    const double d = model.density({0.0, step});
    CHECK(d >= 0.0);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("kde is invariant under dataset permutation", "[density]") {
  std::mt19937_64 eng(8);
  GeoPointSet data = random_cluster(eng, 41.9, -87.6, 0.05, 40);
  const DensityModel a(data, Bandwidth::from_radians(0.002));
  std::shuffle(data.begin(), data.end(), eng);
  const DensityModel b(data, Bandwidth::from_radians(0.002));
  const GeoPoint q{41.91, -87.58};
  CHECK(a.density(q) == Catch::Approx(b.density(q)).epsilon(1e-12));
}

TEST_CASE("gradient vanishes at symmetric points", "[density]") {
  const GeoPoint p{41.8781, -87.6298};
  const DensityModel lone({p}, Bandwidth::from_radians(0.002));
  const Vec2 g0 = lone.gradient(p);
  const double scale = lone.density(p) / 0.002;
  CHECK(std::abs(g0.lat) <= 1e-12 * scale);
  CHECK(std::abs(g0.lon) <= 1e-12 * scale);

  // Pair symmetric in latitude about the query.
  const DensityModel lat_pair({{41.0, 10.0}, {43.0, 10.0}},
                              Bandwidth::from_radians(0.02));
  const Vec2 g1 = lat_pair.gradient({42.0, 10.0});
  const double s1 = lat_pair.density({42.0, 10.0}) / 0.02;
  CHECK(std::abs(g1.lat) <= 1e-12 * s1);
  CHECK(std::abs(g1.lon) <= 1e-12 * s1);

  // Pair symmetric in longitude about the query, on the equator where the
  // metric is flat in both directions.
  const DensityModel lon_pair({{0.0, 9.0}, {0.0, 11.0}},
                              Bandwidth::from_radians(0.02));
  const Vec2 g2 = lon_pair.gradient({0.0, 10.0});
  const double s2 = lon_pair.density({0.0, 10.0}) / 0.02;
  CHECK(std::abs(g2.lat) <= 1e-12 * s2);
  CHECK(std::abs(g2.lon) <= 1e-12 * s2);

  // Off the equator only the longitude component cancels: great circles
  // between east-west pairs arc poleward, so the density tilts in latitude.
  const DensityModel off({{42.0, 9.0}, {42.0, 11.0}}, Bandwidth::from_radians(0.02));
  const Vec2 g3 = off.gradient({42.0, 10.0});
  const double s3 = off.density({42.0, 10.0}) / 0.02;
  CHECK(std::abs(g3.lon) <= 1e-12 * s3);
  CHECK(std::abs(g3.lat) > 1e-6 * s3);
}

TEST_CASE("analytic gradient and Hessian match finite differences", "[density]") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> clat(-60.0, 60.0), clon(-170.0, 170.0);
  std::uniform_real_distribution<double> ubw(5e-4, 5e-3), off(-0.1, 0.1);
  for (int rep = 0; rep < 40; ++rep) {
    const double lat0 = clat(eng), lon0 = clon(eng);
    const GeoPointSet data = random_cluster(eng, lat0, lon0, 0.05, 10);
    const DensityModel model(data, Bandwidth::from_radians(ubw(eng)));
    const double phi = degrees_to_radians(lat0 + off(eng));
    const double lam = degrees_to_radians(lon0 + off(eng));
    const Vec2 g = model.gradient_radians(phi, lam);
    CHECK(rel_err(g, fd_gradient(model, phi, lam)) <= 1e-5);
    const SymMat2 h = model.hessian_radians(phi, lam);
    CHECK(rel_err(h, fd_hessian(model, phi, lam)) <= 1e-4);
  }
}

TEST_CASE("Hessian is negative definite at a lone mode", "[density]") {
  const GeoPoint p{35.0, 120.0};
  const DensityModel model({p}, Bandwidth::from_radians(0.001));
  const Eigen2 e = eigen_sym2(model.hessian(p));
  CHECK(e.lambda_min < 0.0);
  CHECK(e.lambda_max < 0.0);
}

TEST_CASE("Hessian eigenvalues nearly tie at the centroid of an isotropic cloud",
          "[density]") {
  // Near the equator both chart isotropy and metric isotropy coincide.
  Rng rng(99);
  GeoPointSet data;
  const double sigma = 0.002;  // radians
  for (int i = 0; i < 1000; ++i) {
    const auto [g1, g2] = rng.gaussian_pair();
    data.push_back({radians_to_degrees(sigma * g1), radians_to_degrees(sigma * g2)});
  }
  const DensityModel model(data, Bandwidth::from_radians(0.002));
  double lat = 0.0, lon = 0.0;
  for (const auto& p : data) {
    lat += p.lat;
    lon += p.lon;
  }
  const GeoPoint centroid{lat / data.size(), lon / data.size()};
  const Eigen2 e = eigen_sym2(model.hessian(centroid));
  CHECK(e.lambda_min < 0.0);
  CHECK(e.lambda_max < 0.0);
  CHECK(std::abs(e.lambda_min - e.lambda_max) / std::abs(e.lambda_min) < 0.2);
}

TEST_CASE("bandwidth type validation", "[density]") {
  CHECK_THROWS_AS(validate(Bandwidth::from_radians(0.0)), DomainError);
  CHECK_THROWS_AS(validate(Bandwidth::from_radians(-1.0)), DomainError);
  CHECK_THROWS_AS(
      validate(Bandwidth::from_radians(std::numeric_limits<double>::infinity())),
      DomainError);
  CHECK(Bandwidth::from_degrees(1.0).radians() ==
        Catch::Approx(degrees_to_radians(1.0)));
}
