#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "ridgeline/errors.hpp"

namespace ridgeline {

// Quantile with linear interpolation between closest ranks (inclusive
// endpoints); q = 0 gives the minimum, q = 1 the maximum.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw ParameterError("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator).
inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) throw ParameterError("sample_sd needs at least 2 values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Two-sided Student-t critical value for a confidence level, e.g.
// t_critical(0.95, 9) = t_{0.975, 9}.
inline double t_critical(double level, int dof) {
  if (dof < 1) throw ParameterError("t_critical needs dof >= 1");
  if (!(level > 0.0 && level < 1.0))
    throw ParameterError("confidence level outside (0, 1)");
  boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.5 + level / 2.0);
}

}  // namespace ridgeline
