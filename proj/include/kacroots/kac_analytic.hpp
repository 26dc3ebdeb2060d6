#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "kacroots/errors.hpp"
#include "kacroots/quadrature.hpp"
#include "kacroots/special.hpp"

namespace kacroots {

/// Coefficient law of a Kac polynomial with n i.i.d. terms: second moment
/// sigma = E[c^2] and mean mu = E[c].
struct KacParams {
  std::size_t n = 2;
  double sigma = 1.0;
  double mu = 0.0;

  void validate() const {
    if (n < 1) throw DomainError("KacParams: n must be >= 1");
    if (!(sigma > 0.0)) throw DomainError("KacParams: sigma must be positive");
    if (!std::isfinite(mu)) throw DomainError("KacParams: mu must be finite");
  }
};

/// Covariance structure of (f_n(t), f_n'(t)) and the mean-shift terms of the
/// nonzero-mean density. A = Var f, B = Cov(f, f'), C = Var f', G = E f,
/// D = E[f' | f = 0]-type shift G' - G B / A, Sigma1 = A D^2 / (AC - B^2),
/// Sigma2 = G^2 / A.
struct GlobalMoments {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double G = 0.0;
  double Sigma1 = 0.0;
  double Sigma2 = 0.0;

  double discriminant() const noexcept { return A * C - B * B; }
};

namespace detail {

/// True where the geometric closed forms lose digits and the O(n) sums are
/// used instead: within 1e-4 of t = +-1, or where n |1 - t^2| <= 30 (the
/// closed-form numerators cancel terms of size n^2 t^(2n) there).
inline bool use_direct_sums(std::size_t n, double t) noexcept {
  const double nn = static_cast<double>(n);
  return std::abs(t - 1.0) < 1e-4 || std::abs(t + 1.0) < 1e-4 || nn * std::abs(1.0 - t * t) <= 30.0;
}

}  // namespace detail

/// Moment sums A = sigma sum t^{2j}, B = sigma sum j t^{2j-1},
/// C = sigma sum j^2 t^{2j-2}, G = mu sum t^j, G' = mu sum j t^{j-1} (j < n),
/// and the derived D, Sigma1, Sigma2. For |t| > 1 and large n the raw sums
/// overflow; the density functions avoid that region through inversion.
inline GlobalMoments global_moments(const KacParams& params, double t) {
  params.validate();
  const std::size_t n = params.n;
  const double nn = static_cast<double>(n);
  double s_even = 0.0, s_odd = 0.0, s_sq = 0.0, s_plain = 0.0, s_deriv = 0.0;

  if (detail::use_direct_sums(n, t)) {
    const double a = t * t;
    double a_pow = 1.0;  // a^j
    double t_pow = 1.0;  // t^j
    for (std::size_t j = 0; j < n; ++j) {
      const double jd = static_cast<double>(j);
      s_even += a_pow;
      s_plain += t_pow;
      if (j + 1 < n) {
        // terms of index j + 1 carry a^j and t^j
        const double j1 = jd + 1.0;
        s_odd += j1 * a_pow * t;
        s_sq += j1 * j1 * a_pow;
        s_deriv += j1 * t_pow;
      }
      a_pow *= a;
      t_pow *= t;
    }
  } else {
    const double a = t * t;
    const double an1 = std::pow(a, nn - 1.0);
    const double an = an1 * a;
    const double om = 1.0 - a;
    s_even = (1.0 - an) / om;
    s_odd = t * (1.0 - nn * an1 + (nn - 1.0) * an) / (om * om);
    s_sq = (1.0 + a - nn * nn * an1 + (2.0 * nn * nn - 2.0 * nn - 1.0) * an -
            (nn - 1.0) * (nn - 1.0) * an * a) /
           (om * om * om);
    const double tn1 = std::pow(t, nn - 1.0);
    const double tn = tn1 * t;
    const double omt = 1.0 - t;
    s_plain = (1.0 - tn) / omt;
    s_deriv = (1.0 - nn * tn1 + (nn - 1.0) * tn) / (omt * omt);
  }

  GlobalMoments m;
  m.A = params.sigma * s_even;
  m.B = params.sigma * s_odd;
  m.C = params.sigma * s_sq;
  m.G = params.mu * s_plain;
  m.D = params.mu == 0.0 ? 0.0 : -m.G * m.B / m.A + params.mu * s_deriv;
  const double disc = std::max(0.0, m.discriminant());
  if (m.D == 0.0) {
    m.Sigma1 = 0.0;
  } else {
    m.Sigma1 = disc > 0.0 ? m.A * m.D * m.D / disc : std::numeric_limits<double>::infinity();
  }
  m.Sigma2 = m.G * m.G / m.A;
  return m;
}

/// Psi(z) = int_0^inf q exp(-q^2/2) cosh(q sqrt z) dq, continued to z < 0
/// through cosh(i x) = cos x.
///
/// z >= 0: 1 + s exp(s^2/2) sqrt(pi/2) erf(s/sqrt 2), s = sqrt z.
/// z <  0: 1 - sqrt(2) s F(s/sqrt 2), s = sqrt(-z), F = Dawson's integral.
/// Psi(0) = 1. On the negative axis Psi changes sign near z = -1.708.
inline double psi_factor(double z) {
  if (z >= 0.0) {
    const double s = std::sqrt(z);
    return 1.0 + s * std::exp(0.5 * z) * std::sqrt(std::numbers::pi / 2.0) *
                     std::erf(s / std::numbers::sqrt2);
  }
  const double s = std::sqrt(-z);
  return 1.0 - std::numbers::sqrt2 * s * special::dawson(s / std::numbers::sqrt2);
}

/// exp(-decay) * Psi(z) for z >= 0 without forming exp(z/2) on its own.
inline double damped_psi(double z, double decay) {
  if (z < 0.0) return std::exp(-decay) * psi_factor(z);
  const double s = std::sqrt(z);
  return std::exp(-decay) + s * std::sqrt(std::numbers::pi / 2.0) *
                                std::erf(s / std::numbers::sqrt2) * std::exp(0.5 * z - decay);
}

/// Kac density of real zeros for zero-mean Gaussian coefficients (mu is
/// ignored): sqrt(AC - B^2) / (pi A), roots per unit t. Identically zero for
/// n = 1. For |t| > 1 the inversion identity p(t) = p(1/t) / t^2 is used.
inline double kac_density(const KacParams& params, double t) {
  params.validate();
  if (params.n == 1) return 0.0;
  if (std::abs(t) > 1.0) {
    const double s = 1.0 / t;
    return kac_density(params, s) * s * s;
  }
  KacParams zero_mean = params;
  zero_mean.mu = 0.0;
  const GlobalMoments m = global_moments(zero_mean, t);
  return std::sqrt(std::max(0.0, m.discriminant())) / (std::numbers::pi * m.A);
}

/// Density of real zeros for Gaussian coefficients with mean mu:
/// p_n(t) exp(-(Sigma1 + Sigma2)/2) Psi(Sigma1). Equals kac_density exactly
/// when mu = 0. Reversing the coefficients preserves any i.i.d. law, so
/// p(t) = p(1/t) / t^2 holds here as well and covers |t| > 1.
inline double kac_density_mean(const KacParams& params, double t) {
  params.validate();
  if (params.n == 1) return 0.0;
  if (std::abs(t) > 1.0) {
    const double s = 1.0 / t;
    return kac_density_mean(params, s) * s * s;
  }
  const GlobalMoments m = global_moments(params, t);
  const double base = std::sqrt(std::max(0.0, m.discriminant())) / (std::numbers::pi * m.A);
  if (m.Sigma1 == 0.0 && m.Sigma2 == 0.0) return base;
  return base * damped_psi(m.Sigma1, 0.5 * (m.Sigma1 + m.Sigma2));
}

/// Expected number of real zeros in [a, b] (infinite ends allowed), by
/// adaptive quadrature of kac_density_mean. Pieces with |t| > 1 are mapped
/// onto (-1, 1) by t -> 1/t, under which p(t) dt is invariant. Breakpoints
/// at +-(1 - s/n) resolve the O(1/n) peaks next to t = +-1.
inline double expected_count_global(const KacParams& params, double a, double b,
                                    const quadrature::Options& opts = {}) {
  params.validate();
  if (!(a < b)) throw DomainError("expected_count_global: need a < b");
  if (params.n == 1) return 0.0;

  const double nn = static_cast<double>(params.n);
  std::vector<double> cuts{0.0};
  for (double s = 0.25; s < nn; s *= 4.0) {
    cuts.push_back(1.0 - s / nn);
    cuts.push_back(-1.0 + s / nn);
  }
  const auto density = [&](double t) { return kac_density_mean(params, t); };
  const auto piece = [&](double lo, double hi) {
    if (!(lo < hi)) return 0.0;
    return quadrature::integrate(density, lo, hi, opts, cuts).value;
  };
  const auto recip = [](double t) { return std::isinf(t) ? std::copysign(0.0, t) : 1.0 / t; };

  double total = piece(std::max(a, -1.0), std::min(b, 1.0));
  if (b > 1.0) total += piece(recip(b), recip(std::max(a, 1.0)));        // (1, inf) -> (0, 1)
  if (a < -1.0) total += piece(recip(std::min(b, -1.0)), recip(a));     // (-inf, -1) -> (-1, 0)
  return total;
}

/// Constant term C in E[#real zeros] = (2/pi) ln n + C + O(n^-2):
/// C = (2/pi) [ ln 2 + int_0^1 g dv - int_1^inf (1/v - g) dv ],
/// g(v) = sqrt(1/v^2 - 1/sinh^2 v). The ln 2 term comes from matching the
/// scaled profile 1/(2 pi v) to the global density 1/(pi (1 - t^2)). The
/// upper integral is cut at v = 45, where the integrand is ~ v e^{-2v}.
inline double wilkins_constant() {
  quadrature::Options opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-13;
  const double inner = quadrature::integrate(special::csch_gap, 0.0, 1.0, opts).value;
  const double cuts[] = {2.0, 4.0, 8.0, 16.0};
  const double outer = quadrature::integrate(special::csch_gap_tail, 1.0, 45.0, opts, cuts).value;
  return 2.0 / std::numbers::pi * (std::numbers::ln2 + inner - outer);
}

}  // namespace kacroots
