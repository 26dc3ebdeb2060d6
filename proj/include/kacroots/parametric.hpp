#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "kacroots/errors.hpp"
#include "kacroots/kac_analytic.hpp"
#include "kacroots/montecarlo.hpp"

namespace kacroots {

/// Diagonal parametric correlation ratio K_{0,v}(t,t) / p(t)^2 between the
/// real roots of f and of f + v b (b standard Gaussian):
///   1 + (1/v) arcsin(1 / sqrt(1 + v^2)),
/// written with arcsin(1/sqrt(1+v^2)) = atan2(1, v). Decreasing in v, tends
/// to 1 + pi/(2v) as v -> 0 and to 1 as v -> inf.
inline double parametric_ratio(double v_param) {
  if (!(v_param > 0.0)) {
    throw DomainError("parametric_ratio: v must be positive (diverges like 1 + pi/(2v) at 0)");
  }
  return 1.0 + std::atan2(1.0, v_param) / v_param;
}

/// Monte Carlo set-up for the coincidence estimator. `v_param` is the
/// perturbation magnitude, unrelated to the scaled coordinate v. When `delta`
/// is empty the half-width is chosen so that p(t_center) * 2 delta = 0.05.
struct PerturbationSpec {
  double v_param = 1.0;
  EnsembleSpec base;
  double t_center = 0.95;
  std::optional<double> delta;
};

struct ParametricEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
  double delta = 0.0;
  double density = 0.0;                 // analytic p(t_center)
  std::uint64_t nonzero_products = 0;
};

/// Estimates K_{0,v}(t,t) / p(t)^2 as mean(N1 N2) / ((2 delta)^2 p^2), with
/// N1, N2 the root counts of f and f + v b in [t - delta, t + delta] and p
/// the analytic density. The standard error is a 100-block jackknife.
/// Throws InsufficientStatistics below 100 nonzero products.
inline ParametricEstimate estimate_parametric_ratio(const PerturbationSpec& spec,
                                                    const RunOptions& opts = {}) {
  const EnsembleSpec& base = spec.base;
  if (!(spec.v_param > 0.0)) throw DomainError("estimate_parametric_ratio: v_param must be positive");
  if (base.n < 2) throw DomainError("estimate_parametric_ratio: n must be >= 2");
  if (base.reps == 0) throw DomainError("estimate_parametric_ratio: reps must be positive");

  const KacParams params{base.n, 1.0, base.mean()};
  const double density = kac_density_mean(params, spec.t_center);
  if (!(density > 0.0)) throw DomainError("estimate_parametric_ratio: zero density at t_center");
  const double delta = spec.delta ? *spec.delta : 0.025 / density;
  if (!(delta > 0.0)) throw DomainError("estimate_parametric_ratio: delta must be positive");
  const double lo = spec.t_center - delta;
  const double hi = spec.t_center + delta;
  const double step = std::min(scaled_grid_step(base.n), (hi - lo) / 64.0);

  const std::uint64_t blocks = std::min<std::uint64_t>(100, base.reps);
  struct Acc {
    std::vector<std::uint64_t> block_sums;
    std::uint64_t nonzero = 0;
  };
  const auto make = [&] { return Acc{std::vector<std::uint64_t>(blocks, 0), 0}; };
  const auto body = [&](Acc& acc, std::uint64_t i) {
    const Poly f = sample_coefficients(base, i);
    rng::CounterStream pert(base.seed, i, 1);
    std::vector<double> shifted(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t j = 0; j < shifted.size(); j += 2) {
      const auto z = pert.normal_pair();
      shifted[j] += spec.v_param * z[0];
      if (j + 1 < shifted.size()) shifted[j + 1] += spec.v_param * z[1];
    }
    const std::uint64_t n1 = count_roots_scan(f, lo, hi, step).count;
    if (n1 == 0) return;
    const std::uint64_t n2 = count_roots_scan(Poly(std::move(shifted)), lo, hi, step).count;
    if (n2 == 0) return;
    acc.block_sums[i * blocks / base.reps] += n1 * n2;
    ++acc.nonzero;
  };
  const auto merge = [](Acc& into, const Acc& from) {
    for (std::size_t b = 0; b < into.block_sums.size(); ++b) into.block_sums[b] += from.block_sums[b];
    into.nonzero += from.nonzero;
  };
  const Acc total = detail::parallel_reduce<Acc>(base.reps, opts.workers, make, body, merge);
  if (total.nonzero < 100) {
    throw InsufficientStatistics("estimate_parametric_ratio: only " + std::to_string(total.nonzero) +
                                 " nonzero products; increase reps or delta");
  }

  const double norm = 4.0 * delta * delta * density * density;
  const double reps = static_cast<double>(base.reps);
  std::uint64_t grand = 0;
  for (auto s : total.block_sums) grand += s;

  ParametricEstimate out;
  out.delta = delta;
  out.density = density;
  out.nonzero_products = total.nonzero;
  out.ratio = static_cast<double>(grand) / reps / norm;

  std::vector<double> leave_out(blocks);
  double mean_leave_out = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    // indices with floor(i * blocks / reps) == b
    const std::uint64_t size = ((b + 1) * base.reps + blocks - 1) / blocks - (b * base.reps + blocks - 1) / blocks;
    leave_out[b] = static_cast<double>(grand - total.block_sums[b]) / (reps - static_cast<double>(size)) / norm;
    mean_leave_out += leave_out[b];
  }
  mean_leave_out /= static_cast<double>(blocks);
  double ss = 0.0;
  for (double x : leave_out) ss += (x - mean_leave_out) * (x - mean_leave_out);
  const double bd = static_cast<double>(blocks);
  out.std_error = std::sqrt((bd - 1.0) / bd * ss);
  return out;
}

}  // namespace kacroots
