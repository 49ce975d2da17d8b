#pragma once

#include <cmath>

namespace ridgeline {

// 2-vector over local (lat, lon) radian coordinates.
struct Vec2 {
  double lat = 0.0;
  double lon = 0.0;

  Vec2 operator+(const Vec2& o) const { return {lat + o.lat, lon + o.lon}; }
  Vec2 operator-(const Vec2& o) const { return {lat - o.lat, lon - o.lon}; }
  Vec2 operator*(double s) const { return {lat * s, lon * s}; }
  double dot(const Vec2& o) const { return lat * o.lat + lon * o.lon; }
  double norm() const { return std::hypot(lat, lon); }
};

// Symmetric 2x2 matrix; index 0 = lat, 1 = lon.
struct SymMat2 {
  double m00 = 0.0;
  double m01 = 0.0;
  double m11 = 0.0;

  Vec2 apply(const Vec2& v) const {
    return {m00 * v.lat + m01 * v.lon, m01 * v.lat + m11 * v.lon};
  }
  SymMat2 operator+(const SymMat2& o) const {
    return {m00 + o.m00, m01 + o.m01, m11 + o.m11};
  }
  SymMat2 operator-(const SymMat2& o) const {
    return {m00 - o.m00, m01 - o.m01, m11 - o.m11};
  }
  SymMat2 operator*(double s) const { return {m00 * s, m01 * s, m11 * s}; }
  double trace() const { return m00 + m11; }
  double frobenius() const {
    return std::sqrt(m00 * m00 + 2.0 * m01 * m01 + m11 * m11);
  }
};

struct Eigen2 {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Vec2 v_min;       // unit eigenvector of lambda_min
  bool tie = false; // eigenvalues indistinguishable at working precision
};

// Closed-form eigendecomposition of a symmetric 2x2 matrix.
inline Eigen2 eigen_sym2(const SymMat2& h) {
  Eigen2 e;
  const double half_tr = 0.5 * (h.m00 + h.m11);
  const double half_diff = 0.5 * (h.m00 - h.m11);
  const double disc = std::hypot(half_diff, h.m01);
  e.lambda_min = half_tr - disc;
  e.lambda_max = half_tr + disc;
  const double scale =
      std::max({std::abs(h.m00), std::abs(h.m11), std::abs(h.m01)});
  if (disc <= 1e-15 * scale || scale == 0.0) {
    e.tie = true;
    e.v_min = {1.0, 0.0};
    return e;
  }
  // Pick the better-conditioned eigenvector formula of the two rows.
  Vec2 v = (half_diff >= 0.0) ? Vec2{h.m01, -(half_diff + disc)}
                              : Vec2{half_diff - disc, h.m01};
  const double n = v.norm();
  if (n == 0.0) {
    e.tie = true;
    e.v_min = {1.0, 0.0};
    return e;
  }
  e.v_min = v * (1.0 / n);
  return e;
}

// Rank-one projector v v^T for a unit vector v.
inline SymMat2 projector(const Vec2& v) {
  return {v.lat * v.lat, v.lat * v.lon, v.lon * v.lon};
}

}  // namespace ridgeline
