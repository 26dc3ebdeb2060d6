#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "kacroots/errors.hpp"

namespace kacroots {

/// Dense real polynomial c_0 + c_1 t + ... + c_{n-1} t^{n-1}.
///
/// Coefficients are stored lowest degree first and are never trimmed: a
/// realization whose leading coefficient happens to vanish keeps its length,
/// because ensemble statistics are defined at a fixed number of terms.
class Poly {
 public:
  Poly() : coeffs_{0.0} {}

  explicit Poly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("Poly needs at least one coefficient");
  }

  Poly(std::initializer_list<double> coeffs) : Poly(std::vector<double>(coeffs)) {}

  /// Number of terms n (degree is at most n - 1).
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t j) const { return coeffs_[j]; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Horner evaluation. Overflow propagates as +-inf; callers bound |t|.
inline double evaluate(const Poly& p, double t) noexcept {
  const auto c = p.coeffs();
  double acc = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) acc = acc * t + c[j];
  return acc;
}

/// Evaluates p and p' together in one Horner pass.
inline std::pair<double, double> evaluate_with_derivative(const Poly& p, double t) noexcept {
  const auto c = p.coeffs();
  double value = c.back();
  double slope = 0.0;
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    slope = slope * t + value;
    value = value * t + c[j];
  }
  return {value, slope};
}

/// Evaluates p at every point of `ts` into `out` (same length).
///
/// The coefficient loop is outermost so the inner loop runs over independent
/// points and vectorizes; results are bit-identical to evaluate().
inline void evaluate_many(const Poly& p, std::span<const double> ts, std::span<double> out) noexcept {
  const auto c = p.coeffs();
  const std::size_t m = ts.size();
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m), c.back());
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    const double cj = c[j];
    for (std::size_t k = 0; k < m; ++k) out[k] = out[k] * ts[k] + cj;
  }
}

/// Coefficients j*c_j shifted down one index; d/dt of a constant is [0].
inline Poly derivative(const Poly& p) {
  const auto c = p.coeffs();
  if (c.size() == 1) return Poly{0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
  return Poly(std::move(d));
}

/// Coefficient reversal: a nonzero root r of p maps to the root 1/r of the
/// result. This is the t -> 1/t inversion used to count roots with |t| > 1.
inline Poly reverse(const Poly& p) {
  const auto c = p.coeffs();
  return Poly(std::vector<double>(c.rbegin(), c.rend()));
}

}  // namespace kacroots
