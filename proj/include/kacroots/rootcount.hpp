#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kacroots/errors.hpp"
#include "kacroots/poly.hpp"

namespace kacroots {

/// Real roots of a polynomial isolated inside [a, b].
struct RootReport {
  std::size_t count = 0;
  std::vector<double> roots;  // strictly increasing, all inside [a, b]
  double a = 0.0;
  double b = 0.0;
  double resolution = 0.0;  // grid step actually used
};

/// Grid parameters shared by the scanning routines. An empty grid_step
/// selects default_grid_step().
struct ScanOptions {
  std::optional<double> grid_step;
  double refine_tol = 1e-12;
};

/// |t| above this bound makes t^j overflow for O(1) coefficients at length n.
inline double overflow_limit(std::size_t n) noexcept { return 1.0 + 50.0 / static_cast<double>(n); }

inline double default_grid_step(const Poly& p, double a, double b) noexcept {
  const double cells = std::max(1024.0, 8.0 * static_cast<double>(p.size()));
  return (b - a) / cells;
}

namespace detail {

inline int sign_of(double x) noexcept { return (x > 0.0) - (x < 0.0); }

/// Bisection on a sign-change bracket [lo, hi] with f(lo) of sign `sign_lo`.
template <class F>
double bisect(F&& f, double lo, double hi, int sign_lo, double tol) {
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(f(mid));
    if (s == 0) return mid;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Looks for a close pair of roots hidden in [lo, hi], where p has the same
/// nonzero sign `side` at both ends and |p| dips in between. Locates the
/// critical point of p by bisection on p'; when p changes sign there, both
/// roots are isolated on either side of it.
inline void resolve_close_pair(const Poly& p, double lo, double hi, int side, double tol,
                               std::vector<double>& roots) {
  const auto slope = [&](double t) { return evaluate_with_derivative(p, t).second; };
  const int s_lo = sign_of(slope(lo));
  const int s_hi = sign_of(slope(hi));
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) return;
  // |p| decreases into the dip only if p' points toward zero at lo.
  if (s_lo == side) return;
  const double crit = bisect(slope, lo, hi, s_lo, tol);
  const double at_crit = evaluate(p, crit);
  if (at_crit == 0.0) {
    roots.push_back(crit);
    return;
  }
  if (sign_of(at_crit) == side) return;
  const auto value = [&](double t) { return evaluate(p, t); };
  roots.push_back(bisect(value, lo, crit, side, tol));
  roots.push_back(bisect(value, crit, hi, -side, tol));
}

}  // namespace detail

/// Counts and locates the real roots of p in [a, b] by a uniform-grid sign
/// scan with bisection refinement.
///
/// Sign changes between neighbouring grid points are refined to width
/// refine_tol. Grid points where |p| has a discrete local minimum without a
/// sign change get one extra pass that searches for a close pair of roots.
/// A grid point where p is exactly 0.0 is reported as a root. Tangent
/// (even-multiplicity) roots can be missed; they have probability zero for
/// continuous coefficient laws.
///
/// Throws OverflowPolicyError when the window leaves |t| <= 1 + 50/n; scan
/// reverse(p) on the reciprocal window instead.
inline RootReport count_roots_scan(const Poly& p, double a, double b, double grid_step,
                                   double refine_tol = 1e-12) {
  if (!(a < b)) throw DomainError("count_roots_scan: need a < b");
  if (!(grid_step > 0.0)) throw DomainError("count_roots_scan: grid_step must be positive");
  if (!(refine_tol > 0.0)) throw DomainError("count_roots_scan: refine_tol must be positive");
  const double limit = overflow_limit(p.size());
  if (b > limit || a < -limit) {
    throw OverflowPolicyError("count_roots_scan: window [" + std::to_string(a) + ", " +
                              std::to_string(b) + "] exceeds |t| <= 1 + 50/n; scan reverse(p)");
  }
  const auto c = p.coeffs();
  if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; })) {
    throw DomainError("count_roots_scan: the zero polynomial has no isolated roots");
  }

  RootReport report;
  report.a = a;
  report.b = b;
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / grid_step)));
  const double h = (b - a) / static_cast<double>(cells);
  report.resolution = h;

  std::vector<double> xs(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) xs[k] = a + static_cast<double>(k) * h;
  xs.back() = b;
  std::vector<double> vals(cells + 1);
  evaluate_many(p, xs, vals);

  if (p.size() == 1) return report;  // nonzero constant

  const auto value = [&](double t) { return evaluate(p, t); };
  std::vector<double>& roots = report.roots;
  for (std::size_t k = 0; k <= cells; ++k) {
    if (vals[k] == 0.0) roots.push_back(xs[k]);
  }
  for (std::size_t k = 0; k < cells; ++k) {
    const int s0 = detail::sign_of(vals[k]);
    const int s1 = detail::sign_of(vals[k + 1]);
    if (s0 != 0 && s1 != 0 && s0 != s1) {
      roots.push_back(detail::bisect(value, xs[k], xs[k + 1], s0, refine_tol));
    }
  }

  // Close-pair pass around discrete minima of |p| that show no sign change.
  const auto same_side = [&](std::size_t i, std::size_t j) {
    const int s = detail::sign_of(vals[i]);
    return s != 0 && s == detail::sign_of(vals[j]);
  };
  if (cells >= 1 && same_side(0, 1) && std::abs(vals[0]) <= std::abs(vals[1])) {
    detail::resolve_close_pair(p, xs[0], xs[1], detail::sign_of(vals[0]), refine_tol, roots);
  }
  for (std::size_t k = 1; k < cells; ++k) {
    if (!same_side(k - 1, k) || !same_side(k, k + 1)) continue;
    const double mk = std::abs(vals[k]);
    if (mk <= std::abs(vals[k - 1]) && mk <= std::abs(vals[k + 1])) {
      detail::resolve_close_pair(p, xs[k - 1], xs[k + 1], detail::sign_of(vals[k]), refine_tol,
                                 roots);
      ++k;
    }
  }
  if (cells >= 2 && same_side(cells - 1, cells) &&
      std::abs(vals[cells]) <= std::abs(vals[cells - 1])) {
    detail::resolve_close_pair(p, xs[cells - 1], xs[cells], detail::sign_of(vals[cells]),
                               refine_tol, roots);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  unique.reserve(roots.size());
  for (double r : roots) {
    if (unique.empty() || r - unique.back() >= refine_tol) unique.push_back(r);
  }
  roots = std::move(unique);
  report.count = roots.size();
  return report;
}

inline RootReport count_roots_scan(const Poly& p, double a, double b, const ScanOptions& opts) {
  const double step = opts.grid_step ? *opts.grid_step : default_grid_step(p, a, b);
  return count_roots_scan(p, a, b, step, opts.refine_tol);
}

/// Largest length accepted by sturm_count.
inline constexpr std::size_t kSturmMaxLength = 64;

/// Exact count of distinct real roots of p in the open interval (a, b) from a
/// Sturm sequence built in 50-digit binary floating point.
///
/// Remainders whose coefficients fall below 1e-13 of the (unit-normalized)
/// dividend are treated as zero, so a repeated root that double rounding has
/// split by ~1e-8 still counts once. An endpoint where p vanishes is moved
/// 1e-12 into the interval.
inline int sturm_count(const Poly& p, double a, double b) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  using Chain = std::vector<Real>;  // lowest degree first, no trailing zeros

  if (p.size() > kSturmMaxLength) {
    throw DegreeTooLarge("sturm_count: length " + std::to_string(p.size()) + " exceeds " +
                         std::to_string(kSturmMaxLength));
  }
  if (!(a < b)) throw DomainError("sturm_count: need a < b");

  Chain p0(p.coeffs().begin(), p.coeffs().end());
  while (p0.size() > 1 && p0.back() == 0) p0.pop_back();
  if (p0.size() == 1) {
    if (p0[0] == 0) throw DomainError("sturm_count: the zero polynomial has no isolated roots");
    return 0;
  }

  const auto normalize = [](Chain& q) {
    Real m = 0;
    for (const Real& x : q) m = std::max(m, Real(abs(x)));
    for (Real& x : q) x /= m;
  };
  const auto eval = [](const Chain& q, const Real& t) {
    Real acc = q.back();
    for (std::size_t j = q.size() - 1; j-- > 0;) acc = acc * t + q[j];
    return acc;
  };

  normalize(p0);
  std::vector<Chain> chain{p0};
  Chain d(p0.size() - 1);
  for (std::size_t j = 1; j < p0.size(); ++j) d[j - 1] = p0[j] * static_cast<double>(j);
  normalize(d);
  chain.push_back(d);

  const Real zero_tol("1e-13");
  while (chain.back().size() > 1) {
    Chain rem = chain[chain.size() - 2];
    const Chain& div = chain.back();
    const std::size_t dd = div.size() - 1;
    for (std::size_t k = rem.size(); k-- > dd;) {
      const Real factor = rem[k] / div[dd];
      for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= factor * div[j];
      rem[k] = 0;
    }
    rem.resize(dd);
    while (!rem.empty() && abs(rem.back()) <= zero_tol) rem.pop_back();
    bool all_small = true;
    for (const Real& x : rem) all_small = all_small && abs(x) <= zero_tol;
    if (rem.empty() || all_small) break;
    for (Real& x : rem) x = -x;
    normalize(rem);
    chain.push_back(std::move(rem));
  }

  const auto variations = [&](const Real& t) {
    int changes = 0;
    int last = 0;
    for (const Chain& q : chain) {
      const Real v = eval(q, t);
      const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  };

  Real lo(a);
  Real hi(b);
  if (eval(p0, lo) == 0) lo += Real("1e-12");
  if (eval(p0, hi) == 0) hi -= Real("1e-12");
  return variations(lo) - variations(hi);
}

/// Total number of real roots on the whole line.
///
/// Roots in [-1, 1] come from p directly; roots with |t| > 1 are found as the
/// roots of reverse(p) in the open interval (-1, 1), so t^j is never evaluated
/// beyond |t| = 1. A vanishing leading coefficient (a root of reverse(p) at 0,
/// i.e. a root "at infinity") is deflated away.
inline std::size_t count_roots_total(const Poly& p, const ScanOptions& opts = {}) {
  const std::size_t inside = count_roots_scan(p, -1.0, 1.0, opts).count;

  const auto c = p.coeffs();
  std::size_t top = c.size();
  while (top > 0 && c[top - 1] == 0.0) --top;
  if (top <= 1) return inside;
  // reverse(p) with the factor t^(n - top) divided out.
  const Poly rev(std::vector<double>(c.rbegin() + static_cast<std::ptrdiff_t>(c.size() - top),
                                     c.rend()));
  const RootReport outer = count_roots_scan(rev, -1.0, 1.0, opts);
  std::size_t beyond = 0;
  for (double r : outer.roots) {
    if (r > -1.0 && r < 1.0 && r != 0.0) ++beyond;
  }
  return inside + beyond;
}

}  // namespace kacroots
