#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "kacroots/errors.hpp"
#include "kacroots/kac_analytic.hpp"
#include "kacroots/special.hpp"

// Local scaling regime around t = 1: v = n (1 - t), coefficient mean
// mu_n = sqrt(alpha / n) with unit variance. Densities are per unit v.

namespace kacroots {

/// Variances and covariance of the scaled pair (f / sqrt n, f' / n^{3/2}) at
/// t = 1 - v/n, at finite n and in the n -> inf limit:
///   A = (1/n)   sum (1 - v/n)^{2j}
///   B = (1/n^2) sum j (1 - v/n)^{2j-1}
///   C = (1/n^3) sum j^2 (1 - v/n)^{2j-2}
///   Ainf = (1 - e^{-2v}) / (2v), Binf = -Ainf'/2, Cinf = Ainf''/4.
struct ScaledMoments {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double Ainf = 0.0;
  double Binf = 0.0;
  double Cinf = 0.0;
};

namespace detail {

/// (Ainf, Ainf', Ainf'') at v.
inline void limiting_profile(double v, double& a0, double& a1, double& a2) {
  if (std::abs(v) < 0.5) {
    // Ainf = sum_k (-2v)^k / (k+1)!, differentiated termwise.
    a0 = a1 = a2 = 0.0;
    double coef = 1.0;  // (-2)^k / (k+1)!
    for (int k = 0; k < 30; ++k) {
      const double kd = k;
      a0 += coef * std::pow(v, kd);
      if (k >= 1) a1 += coef * kd * std::pow(v, kd - 1.0);
      if (k >= 2) a2 += coef * kd * (kd - 1.0) * std::pow(v, kd - 2.0);
      coef *= -2.0 / (kd + 2.0);
    }
    return;
  }
  const double e = std::exp(-2.0 * v);
  a0 = -std::expm1(-2.0 * v) / (2.0 * v);
  a1 = (e - a0) / v;
  a2 = (-2.0 * e - 2.0 * a1) / v;
}

}  // namespace detail

inline ScaledMoments scaled_moments(std::size_t n, double v) {
  const double nn = static_cast<double>(n);
  if (n < 1 || !(std::abs(v) < nn)) throw DomainError("scaled_moments: need n >= 1 and |v| < n");
  const double x = 1.0 - v / nn;
  const double x2 = x * x;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double pw = 1.0;  // x^{2j}
  for (std::size_t j = 0; j < n; ++j) {
    const double jd = static_cast<double>(j);
    s0 += pw;
    if (j + 1 < n) {
      s1 += (jd + 1.0) * pw * x;
      s2 += (jd + 1.0) * (jd + 1.0) * pw;
    }
    pw *= x2;
  }
  ScaledMoments m;
  m.A = s0 / nn;
  m.B = s1 / (nn * nn);
  m.C = s2 / (nn * nn * nn);
  double a0, a1, a2;
  detail::limiting_profile(v, a0, a1, a2);
  m.Ainf = a0;
  m.Binf = -0.5 * a1;
  m.Cinf = 0.25 * a2;
  return m;
}

/// Universal zero-mean density (1 / 2pi) sqrt(1/v^2 - 1/sinh^2 v); its value
/// at the origin is 1 / (2 pi sqrt 3) and its tail is 1 / (2 pi |v|).
inline double density_zero_mean(double v) {
  return special::csch_gap(v) / (2.0 * std::numbers::pi);
}

/// J(v) = [sinh(v/2) / (v/2)]^2 / (1 + sinh v / v). Even, J(0) = 1/2, ~ 2/|v|
/// in the tail.
inline double j_kernel(double v) {
  const double x = std::abs(v);
  if (x < 1e-2) {
    const double x2 = x * x;
    const double x4 = x2 * x2;
    return 0.5 + x4 * (-1.0 / 1440.0 + x2 * (1.0 / 30240.0 - x2 / 3628800.0));
  }
  if (x > 20.0) {
    const double e = std::exp(-x);
    // 2 (cosh x - 1) / (x (x + sinh x)), numerator and denominator over e^x / 2
    return 2.0 * (1.0 - 2.0 * e + e * e) / (x * (2.0 * x * e + 1.0 - e * e));
  }
  const double half = std::sinh(0.5 * x) / (0.5 * x);
  return half * half / (1.0 + std::sinh(x) / x);
}

/// M(v) = (sinh v / v) / cosh^2(v/2) * (1 - sinh v / v) / (1 + sinh v / v).
/// Even and <= 0 with M(0) = 0; the series at the origin is
/// -v^2/12 + 7v^4/720 - 11v^6/12096 + 13v^8/151200.
inline double m_kernel(double v) {
  const double x = std::abs(v);
  if (x < 1e-2) {
    const double x2 = x * x;
    return x2 * (-1.0 / 12.0 + x2 * (7.0 / 720.0 + x2 * (-11.0 / 12096.0 + x2 * (13.0 / 151200.0))));
  }
  if (x > 20.0) {
    const double e = std::exp(-x);
    const double lead = (2.0 / x) * (1.0 - e) / (1.0 + e);
    return lead * (2.0 * x * e - 1.0 + e * e) / (2.0 * x * e + 1.0 - e * e);
  }
  const double q = std::sinh(x) / x;
  const double ch = std::cosh(0.5 * x);
  const double one_minus_q = -special::sinh_minus_x(x) / x;
  return q / (ch * ch) * one_minus_q / (1.0 + q);
}

/// Universal scaled density at scaled squared mean alpha:
///   (1 / 2pi) sqrt(1/v^2 - 1/sinh^2 v) exp(-alpha J(v)) Psi(-alpha M(v)).
/// The Psi argument is the limit of Sigma1 >= 0, so the cosh branch applies.
/// Reduces exactly to density_zero_mean at alpha = 0.
inline double density_alpha(double alpha, double v) {
  if (!(alpha >= 0.0)) throw DomainError("density_alpha: alpha must be >= 0");
  const double base = density_zero_mean(v);
  if (alpha == 0.0) return base;
  return base * damped_psi(-alpha * m_kernel(v), alpha * j_kernel(v));
}

/// Fourth-order expansion of density_alpha about v = 0, valid for
/// alpha v^2 << 1. Throws DomainError outside |v| <= 0.3 / sqrt(1 + alpha).
inline double small_v_expansion(double alpha, double v) {
  if (!(alpha >= 0.0)) throw DomainError("small_v_expansion: alpha must be >= 0");
  if (std::abs(v) > 0.3 / std::sqrt(1.0 + alpha)) {
    throw DomainError("small_v_expansion: |v| exceeds 0.3 / sqrt(1 + alpha)");
  }
  const double v2 = v * v;
  const double quad = 1.0 / 5.0 - alpha / 6.0;
  const double quart = 137.0 / 350.0 - 5.0 * alpha / 8.0 + alpha * alpha / 12.0;
  const double lead = std::exp(-0.5 * alpha) / (2.0 * std::numbers::pi * std::sqrt(3.0));
  return lead * (1.0 - 0.5 * v2 * quad + v2 * v2 / 36.0 * quart);
}

/// Scaled finite-n density (1/n) p_n(1 - v/n) for mu_n = sqrt(alpha / n),
/// sigma = 1; converges to density_alpha(alpha, v).
inline double finite_scaled_density(std::size_t n, double alpha, double v) {
  const double nn = static_cast<double>(n);
  const KacParams params{n, 1.0, std::sqrt(alpha / nn)};
  return kac_density_mean(params, 1.0 - v / nn) / nn;
}

struct Peak {
  double v = 0.0;
  double p = 0.0;
};

/// Local maxima of density_alpha(alpha, .) on [0, v_max], by a scan with step
/// 1e-3 and golden-section refinement to 1e-8. The density is even, so a
/// maximum at v* > 0 has a mirror at -v*. The origin counts as a maximum when
/// the density does not rise away from it.
inline std::vector<Peak> find_peaks(double alpha, double v_max) {
  if (!(v_max >= 10.0)) throw DomainError("find_peaks: v_max must be >= 10");
  constexpr double step = 1e-3;
  const auto f = [alpha](double v) { return density_alpha(alpha, v); };
  const auto steps = static_cast<std::size_t>(std::ceil(v_max / step));
  std::vector<double> vals(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) vals[k] = f(std::min(v_max, static_cast<double>(k) * step));

  std::vector<Peak> peaks;
  if (vals[0] >= vals[1]) peaks.push_back({0.0, vals[0]});
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 1; k < steps; ++k) {
    if (!(vals[k] > vals[k - 1] && vals[k] >= vals[k + 1])) continue;
    double lo = static_cast<double>(k - 1) * step;
    double hi = static_cast<double>(k + 1) * step;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-8) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = f(x1);
      }
    }
    const double vp = 0.5 * (lo + hi);
    peaks.push_back({vp, f(vp)});
  }
  return peaks;
}

}  // namespace kacroots
