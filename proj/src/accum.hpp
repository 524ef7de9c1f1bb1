#pragma once

// Shared accumulation helpers. vec_norm and the flat solver kernels must
// produce bit-identical values for the same coordinates, so both funnel
// through these routines (fixed order, compensated above 64 coordinates,
// scaled p-th power accumulation).

#include <cmath>
#include <cstdint>
#include <span>

namespace oplab::detail {

// sum of |v_i| in index order; Kahan-compensated when `compensated`
inline double l1_sum(std::span<const double> v, bool compensated) {
  if (!compensated) {
    double s = 0.0;
    for (const double x : v) s += std::abs(x);
    return s;
  }
  double s = 0.0, c = 0.0;
  for (const double x : v) {
    const double y = std::abs(x) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// pow with fast paths for the exponents hit constantly; with a correctly
// rounded libm these agree bit for bit with std::pow
inline double pow_fast(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

// (sum_i v_i^p)^(1/p) for nonnegative v, scaled by max(v) so large entries
// and large exponents cannot overflow the p-th powers
inline double lp_nonneg(std::span<const double> v, double p, bool compensated) {
  double vmax = 0.0;
  for (const double x : v) vmax = std::max(vmax, x);
  if (vmax == 0.0) return 0.0;
  double s = 0.0, c = 0.0;
  for (const double x : v) {
    const double term = pow_fast(x / vmax, p);
    if (!compensated) {
      s += term;
    } else {
      const double y = term - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
  }
  return vmax * pow_fast(s, 1.0 / p);
}

// plain sum in index order (p = 1 outer norm), optionally compensated
inline double sum_nonneg(std::span<const double> v, bool compensated) {
  if (!compensated) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s;
  }
  double s = 0.0, c = 0.0;
  for (const double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double max_nonneg(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s = std::max(s, x);
  return s;
}

}  // namespace oplab::detail
