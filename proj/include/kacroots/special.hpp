#pragma once

#include <cmath>
#include <numbers>

namespace kacroots::special {

/// sinh(x) - x without cancellation for small |x|.
inline double sinh_minus_x(double x) noexcept {
  if (std::abs(x) >= 1.0) return std::sinh(x) - x;
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = term;
  for (int k = 2; k < 12; ++k) {
    term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

/// sqrt(1/v^2 - 1/sinh^2 v), the common root factor of the scaled densities.
///
/// Even in v with limit 1/sqrt(3) at the origin. Near 0 a frozen series is
/// used; elsewhere the product form (1 - r)(1 + r)/v^2 with r = v / sinh v.
inline double csch_gap(double v) noexcept {
  const double x = std::abs(v);
  if (x < 1e-2) {
    const double x2 = x * x;
    // 1/v^2 - 1/sinh^2 v = 1/3 - v^2/15 + 2v^4/189 - v^6/675 + 2v^8/10395
    const double sq =
        1.0 / 3.0 + x2 * (-1.0 / 15.0 + x2 * (2.0 / 189.0 + x2 * (-1.0 / 675.0 + x2 * (2.0 / 10395.0))));
    return std::sqrt(sq);
  }
  if (x > 40.0) {
    const double r = 2.0 * x * std::exp(-x) / (1.0 - std::exp(-2.0 * x));
    return std::sqrt((1.0 - r) * (1.0 + r)) / x;
  }
  const double s = std::sinh(x);
  const double r = x / s;
  const double one_minus_r = sinh_minus_x(x) / s;
  return std::sqrt(one_minus_r * (1.0 + r)) / x;
}

/// 1/v - csch_gap(v) for v > 0, written as r^2 / (v (1 + sqrt(1 - r^2))) so
/// the far tail keeps full relative precision.
inline double csch_gap_tail(double v) noexcept {
  const double x = std::abs(v);
  const double r = x > 40.0 ? 2.0 * x * std::exp(-x) / (1.0 - std::exp(-2.0 * x)) : x / std::sinh(x);
  return r * r / (x * (1.0 + x * csch_gap(x)));
}

/// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
///
/// Taylor series for |x| < 0.2, Rybicki's exponentially convergent sampling
/// sum (step h = 0.2) up to |x| = 6, asymptotic series beyond. Relative
/// accuracy is about 1e-15 throughout.
inline double dawson(double x) noexcept {
  const double ax = std::abs(x);
  double result = 0.0;
  if (ax < 0.2) {
    const double x2 = ax * ax;
    double term = ax;
    result = ax;
    for (int k = 0; k < 30 && std::abs(term) > 1e-18 * result; ++k) {
      term *= -2.0 * x2 / static_cast<double>(2 * k + 3);
      result += term;
    }
  } else if (ax <= 6.0) {
    constexpr double h = 0.2;
    constexpr int terms = 35;  // odd offsets up to +-35 h = +-7
    const double n0 = 2.0 * std::round(ax / (2.0 * h));
    const double xp = ax - n0 * h;
    double sum = 0.0;
    for (int m = -terms; m <= terms; m += 2) {
      const double d = xp - m * h;
      sum += std::exp(-d * d) / (n0 + m);
    }
    result = sum / std::sqrt(std::numbers::pi);
  } else {
    const double inv2x2 = 1.0 / (2.0 * ax * ax);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
      const double next = term * (2.0 * k - 1.0) * inv2x2;
      if (next > term || next < 1e-17) break;
      term = next;
      sum += term;
    }
    result = sum / (2.0 * ax);
  }
  return x < 0.0 ? -result : result;
}

}  // namespace kacroots::special
