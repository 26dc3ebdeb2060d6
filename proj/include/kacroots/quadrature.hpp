#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kacroots/errors.hpp"

namespace kacroots::quadrature {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  unsigned max_depth = 13;  // at most 2^13 panels per piece
};

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod integral of f over the finite interval
/// [a, b], split at every breakpoint that falls strictly inside. Throws
/// QuadratureError when the estimated error exceeds
/// max(abs_tol, rel_tol * |value|).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {},
                 std::span<const double> breakpoints = {}) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quadrature::integrate: need finite a <= b");
  }
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);

  Result out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    // Boost leaves the local error in [-1, 1] units, unscaled by the half-width,
    // so narrow pieces never converge. Hand it the piece already on [-1, 1].
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    const auto g = [&](double x) { return half * f(mid + half * x); };
    double err = 0.0;
    const double piece =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, -1.0, 1.0, opts.max_depth, opts.rel_tol, &err);
    out.value += piece;
    out.error += err;
  }
  if (!std::isfinite(out.value) || out.error > std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value))) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "quadrature did not converge on [%.17g, %.17g]: estimate %.17g, error %.3g", a, b,
                  out.value, out.error);
    throw QuadratureError(msg);
  }
  return out;
}

}  // namespace kacroots::quadrature
