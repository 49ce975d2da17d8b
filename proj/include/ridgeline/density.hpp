#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/linalg.hpp"
#include "ridgeline/parallel.hpp"

namespace ridgeline {

// Kernel scale in radians on the unit sphere.
struct Bandwidth {
  double rad = 0.0;

  static Bandwidth from_radians(double r) { return {r}; }
  static Bandwidth from_degrees(double d) { return {degrees_to_radians(d)}; }
  static Bandwidth from_miles(double mi) { return {miles_to_radians(mi)}; }
  double radians() const { return rad; }
  double degrees() const { return radians_to_degrees(rad); }
  double miles() const { return radians_to_miles(rad); }
};

inline void validate(const Bandwidth& b) {
  if (!(b.rad > 0.0) || !std::isfinite(b.rad))
    throw DomainError("bandwidth must be positive and finite");
}

namespace detail {

// g(a) = u / sqrt(a (1 - a)) and its derivative, where u = 2 asin(sqrt(a))
// is the central angle and a the haversine term. Both appear in the chain
// rule for d(u^2)/da. The direct formulas cancel catastrophically near
// a = 0, so a short series takes over there.
inline void central_angle_chain(double a, double& g, double& gp) {
  if (a < 1e-4) {
    g = 2.0 + a * (4.0 / 3.0 + a * (16.0 / 15.0 + a * (32.0 / 35.0)));
    gp = 4.0 / 3.0 + a * (32.0 / 15.0 + a * (96.0 / 35.0));
    return;
  }
  a = std::min(a, 1.0 - 1e-12);
  const double s2 = a * (1.0 - a);
  const double s = std::sqrt(s2);
  const double u = 2.0 * std::asin(std::sqrt(a));
  g = u / s;
  gp = 1.0 / s2 - u * (1.0 - 2.0 * a) / (2.0 * s2 * s);
}

}  // namespace detail

// Gaussian-kernel density estimate over geospatial points. Kernel distances
// are great-circle central angles (haversine form); gradient and Hessian are
// the exact derivatives of that estimate with respect to the query point's
// (lat, lon) in radians, so they agree with finite differences of the value.
class DensityModel {
 public:
  DensityModel(GeoPointSet data, Bandwidth bandwidth)
      : data_(std::move(data)), bandwidth_(bandwidth) {
    if (data_.empty()) throw DegenerateDataError("density model needs data");
    validate(data_);
    validate(bandwidth_);
    const std::size_t n = data_.size();
    phi_.resize(n);
    lam_.resize(n);
    cos_phi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      phi_[i] = degrees_to_radians(data_[i].lat);
      lam_[i] = degrees_to_radians(data_[i].lon);
      cos_phi_[i] = std::cos(phi_[i]);
    }
  }

  const GeoPointSet& data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  Bandwidth bandwidth() const { return bandwidth_; }
  const std::vector<double>& lat_radians() const { return phi_; }
  const std::vector<double>& lon_radians() const { return lam_; }
  const std::vector<double>& cos_lat() const { return cos_phi_; }

  // 1 / (|data| (2 pi beta^2)), the RBF kernel normalization for d = 2.
  double normalization() const {
    const double b2 = bandwidth_.rad * bandwidth_.rad;
    return 1.0 / (static_cast<double>(size()) * 2.0 * kPi * b2);
  }

  double density(const GeoPoint& x) const {
    validate(x);
    return density_radians(degrees_to_radians(x.lat), degrees_to_radians(x.lon));
  }

  Vec2 gradient(const GeoPoint& x) const {
    validate(x);
    return gradient_radians(degrees_to_radians(x.lat), degrees_to_radians(x.lon));
  }

  SymMat2 hessian(const GeoPoint& x) const {
    validate(x);
    return hessian_radians(degrees_to_radians(x.lat), degrees_to_radians(x.lon));
  }

  double density_radians(double phi, double lam) const {
    const double inv2b2 = 1.0 / (2.0 * bandwidth_.rad * bandwidth_.rad);
    const double cphi = std::cos(phi);
    double sum = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      const double sp = std::sin((phi - phi_[j]) * 0.5);
      const double sl = std::sin((lam - lam_[j]) * 0.5);
      const double a =
          std::clamp(sp * sp + cphi * cos_phi_[j] * sl * sl, 0.0, 1.0);
      const double u = 2.0 * std::asin(std::sqrt(a));
      sum += std::exp(-u * u * inv2b2);
    }
    return sum * normalization();
  }

  Vec2 gradient_radians(double phi, double lam) const {
    const double b2 = bandwidth_.rad * bandwidth_.rad;
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    double glat = 0.0, glon = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      const double hd = (phi - phi_[j]) * 0.5;
      const double hl = (lam - lam_[j]) * 0.5;
      const double sp = std::sin(hd), cp = std::cos(hd);
      const double sl = std::sin(hl), cl = std::cos(hl);
      const double cc = cphi * cos_phi_[j];
      const double a = std::clamp(sp * sp + cc * sl * sl, 0.0, 1.0);
      double g, gp;
      detail::central_angle_chain(a, g, gp);
      const double u = 2.0 * std::asin(std::sqrt(a));
      const double f = std::exp(-u * u / (2.0 * b2));
      const double fprime = -(f / b2) * g;
      const double da_dphi = sp * cp - sphi * cos_phi_[j] * sl * sl;
      const double da_dlam = cc * sl * cl;
      glat += fprime * da_dphi;
      glon += fprime * da_dlam;
    }
    const double c = normalization();
    return {glat * c, glon * c};
  }

  SymMat2 hessian_radians(double phi, double lam) const {
    const double b2 = bandwidth_.rad * bandwidth_.rad;
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      const double hd = (phi - phi_[j]) * 0.5;
      const double hl = (lam - lam_[j]) * 0.5;
      const double sp = std::sin(hd), cp = std::cos(hd);
      const double sl = std::sin(hl), cl = std::cos(hl);
      const double cc = cphi * cos_phi_[j];
      const double a = std::clamp(sp * sp + cc * sl * sl, 0.0, 1.0);
      double g, gp;
      detail::central_angle_chain(a, g, gp);
      const double u = 2.0 * std::asin(std::sqrt(a));
      const double f = std::exp(-u * u / (2.0 * b2));
      const double fprime = -(f / b2) * g;
      const double fsecond = (f / b2) * (g * g / b2 - gp);
      const double da_dphi = sp * cp - sphi * cos_phi_[j] * sl * sl;
      const double da_dlam = cc * sl * cl;
      // Second derivatives of the haversine term a.
      const double a00 = (cp * cp - sp * sp) * 0.5 - cc * sl * sl;
      const double a01 = -sphi * cos_phi_[j] * sl * cl;
      const double a11 = cc * (cl * cl - sl * sl) * 0.5;
      h00 += fsecond * da_dphi * da_dphi + fprime * a00;
      h01 += fsecond * da_dphi * da_dlam + fprime * a01;
      h11 += fsecond * da_dlam * da_dlam + fprime * a11;
    }
    const double c = normalization();
    return {h00 * c, h01 * c, h11 * c};
  }

 private:
  GeoPointSet data_;
  Bandwidth bandwidth_;
  std::vector<double> phi_, lam_, cos_phi_;
};

// Average haversine distance to the k nearest neighbors, averaged over the
// dataset: (1 / (k |data|)) sum_i sum_{j in kNN(i)} d(theta_i, theta_j).
// Exact brute force; the spec of this tool targets |data| <= ~10,000.
inline Bandwidth knn_bandwidth(const GeoPointSet& data, int k, int threads = 1) {
  const std::size_t n = data.size();
  if (n < 2) throw ParameterError("knn_bandwidth needs at least 2 points");
  if (k < 1 || static_cast<std::size_t>(k) > n - 1)
    throw ParameterError("neighbors must be in [1, |data| - 1], got " +
                         std::to_string(k));
  validate(data);
  std::vector<double> phi(n), lam(n), cos_phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = degrees_to_radians(data[i].lat);
    lam[i] = degrees_to_radians(data[i].lon);
    cos_phi[i] = std::cos(phi[i]);
  }
  std::vector<double> row_sums(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> dist;
    dist.reserve(n - 1);
    for (std::size_t i = begin; i < end; ++i) {
      dist.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double sp = std::sin((phi[i] - phi[j]) * 0.5);
        const double sl = std::sin((lam[i] - lam[j]) * 0.5);
        const double a =
            std::clamp(sp * sp + cos_phi[i] * cos_phi[j] * sl * sl, 0.0, 1.0);
        dist.push_back(2.0 * std::asin(std::sqrt(a)));
      }
      std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
      std::sort(dist.begin(), dist.begin() + k);
      double s = 0.0;
      for (int m = 0; m < k; ++m) s += dist[m];
      row_sums[i] = s;
    }
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  const double beta = total / (static_cast<double>(k) * static_cast<double>(n));
  if (!(beta > 0.0))
    throw DegenerateDataError("all points coincide; k-NN bandwidth is zero");
  return Bandwidth::from_radians(beta);
}

}  // namespace ridgeline
