#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ridgeline/linalg.hpp"

using namespace ridgeline;

TEST_CASE("eigen_sym2 solves random symmetric matrices", "[linalg]") {
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const SymMat2 h{u(eng), u(eng), u(eng)};
    const Eigen2 e = eigen_sym2(h);
    REQUIRE(e.lambda_min <= e.lambda_max);
    CHECK(e.v_min.norm() == Catch::Approx(1.0).epsilon(1e-12));
    // Residual of the eigen equation H v = lambda v.
    const Vec2 res = h.apply(e.v_min) - e.v_min * e.lambda_min;
    const double scale = std::max({std::abs(h.m00), std::abs(h.m11),
                                   std::abs(h.m01), 1.0});
    CHECK(res.norm() <= 1e-12 * scale);
    // Trace and determinant recovered by the eigenvalues.
    CHECK(e.lambda_min + e.lambda_max == Catch::Approx(h.trace()).margin(1e-10));
    CHECK(e.lambda_min * e.lambda_max ==
          Catch::Approx(h.m00 * h.m11 - h.m01 * h.m01).margin(1e-8));
  }
}

TEST_CASE("eigen_sym2 picks the axis on diagonal matrices", "[linalg]") {
  const Eigen2 a = eigen_sym2({-5.0, 0.0, -1.0});
  CHECK(a.lambda_min == -5.0);
  CHECK(std::abs(a.v_min.lat) == Catch::Approx(1.0));
  CHECK(a.v_min.lon == 0.0);

  const Eigen2 b = eigen_sym2({-1.0, 0.0, -5.0});
  CHECK(b.lambda_min == -5.0);
  CHECK(std::abs(b.v_min.lon) == Catch::Approx(1.0));

  const Eigen2 tie = eigen_sym2({2.0, 0.0, 2.0});
  CHECK(tie.tie);
}

TEST_CASE("projector satisfies L = L^T, L^2 = L, trace 1", "[linalg]") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen2 e = eigen_sym2({u(eng), u(eng), u(eng)});
    const SymMat2 L = projector(e.v_min);
    CHECK(std::abs(L.trace() - 1.0) <= 1e-10);
    // L^2 for a symmetric rank-one projector.
    const SymMat2 L2{L.m00 * L.m00 + L.m01 * L.m01,
                     L.m00 * L.m01 + L.m01 * L.m11,
                     L.m01 * L.m01 + L.m11 * L.m11};
    CHECK((L2 - L).frobenius() <= 1e-10);
    // Projection idempotence on a vector.
    const Vec2 m{u(eng), u(eng)};
    const Vec2 once = L.apply(m);
    const Vec2 twice = L.apply(once);
    CHECK((twice - once).norm() <= 1e-12 * std::max(1.0, once.norm()));
  }
}
