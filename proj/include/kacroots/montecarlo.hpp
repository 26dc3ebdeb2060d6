#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "kacroots/errors.hpp"
#include "kacroots/poly.hpp"
#include "kacroots/rng.hpp"
#include "kacroots/rootcount.hpp"

namespace kacroots {

enum class Distribution { gaussian, uniform, rademacher };

inline std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::uniform: return "uniform";
    case Distribution::rademacher: return "rademacher";
  }
  return "?";
}

inline std::optional<Distribution> parse_distribution(std::string_view name) noexcept {
  if (name == "gaussian") return Distribution::gaussian;
  if (name == "uniform") return Distribution::uniform;
  if (name == "rademacher") return Distribution::rademacher;
  return std::nullopt;
}

/// A Monte Carlo experiment: `reps` polynomials with n i.i.d. coefficients of
/// unit variance and mean sqrt(alpha / n), roots binned in the scaled window
/// v = n (1 - t) in [v_lo, v_hi].
struct EnsembleSpec {
  std::size_t n = 100;
  Distribution dist = Distribution::gaussian;
  double alpha = 0.0;
  std::uint64_t reps = 20000;
  double v_lo = -10.0;
  double v_hi = 10.0;
  std::size_t bins = 40;
  std::uint64_t seed = 42;

  double mean() const { return std::sqrt(alpha / static_cast<double>(n)); }
  double t_lo() const { return 1.0 - v_hi / static_cast<double>(n); }
  double t_hi() const { return 1.0 - v_lo / static_cast<double>(n); }

  void validate() const {
    if (n < 1) throw DomainError("EnsembleSpec: n must be >= 1");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("EnsembleSpec: alpha must be >= 0");
    if (reps == 0) throw DomainError("EnsembleSpec: reps must be positive");
    if (bins == 0) throw DomainError("EnsembleSpec: bins must be positive");
    if (!(v_lo < v_hi)) throw DomainError("EnsembleSpec: need v_lo < v_hi");
    if (v_hi > static_cast<double>(n)) throw DomainError("EnsembleSpec: need v_hi <= n (t >= 0)");
    if (t_hi() > overflow_limit(n)) {
      throw OverflowPolicyError("EnsembleSpec: v_lo below -50 leaves |t| <= 1 + 50/n");
    }
  }
};

struct HistogramEstimate {
  std::vector<double> bin_edges;       // bins + 1 edges in v, increasing
  std::vector<std::uint64_t> counts;   // roots per bin summed over realizations
  std::vector<double> density;         // counts / (reps * width)
  std::vector<double> std_error;       // sqrt(counts) / (reps * width)
  double total_mean = 0.0;             // roots in the window per realization
  double total_var = 0.0;
  std::uint64_t reps_used = 0;
};

struct TotalCountStats {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};

struct RunOptions {
  unsigned workers = 0;  // 0 selects std::thread::hardware_concurrency()
};

namespace detail {

inline unsigned resolve_workers(unsigned requested, std::uint64_t items) {
  unsigned w = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (items < w) w = static_cast<unsigned>(std::max<std::uint64_t>(1, items));
  return w;
}

/// Runs body(acc, i) for i in [0, items) split into contiguous chunks, one
/// accumulator per worker, then folds them with merge(into, from). Results
/// are independent of the worker count as long as merge is exact (integer
/// sums).
template <class Acc, class Make, class Body, class Merge>
Acc parallel_reduce(std::uint64_t items, unsigned workers, Make make, Body body, Merge merge) {
  const unsigned w = resolve_workers(workers, items);
  std::vector<Acc> partial;
  partial.reserve(w);
  for (unsigned i = 0; i < w; ++i) partial.push_back(make());
  std::vector<std::exception_ptr> errors(w);
  const auto run_chunk = [&](unsigned id) {
    const std::uint64_t lo = items * id / w;
    const std::uint64_t hi = items * (id + 1) / w;
    try {
      for (std::uint64_t i = lo; i < hi; ++i) body(partial[id], i);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (w == 1) {
    run_chunk(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned id = 0; id < w; ++id) pool.emplace_back(run_chunk, id);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc total = make();
  for (auto& acc : partial) merge(total, acc);
  return total;
}

}  // namespace detail

/// Coefficients of realization `index`: n i.i.d. draws of mean mu_n and unit
/// variance. gaussian N(mu_n, 1); uniform on [mu_n - sqrt 3, mu_n + sqrt 3];
/// rademacher mu_n +- 1. A pure function of (spec.seed, index).
inline Poly sample_coefficients(const EnsembleSpec& spec, std::uint64_t index) {
  const double mu = spec.mean();
  std::vector<double> c(spec.n);
  rng::CounterStream stream(spec.seed, index, 0);
  switch (spec.dist) {
    case Distribution::gaussian:
      for (std::size_t j = 0; j < spec.n; j += 2) {
        const auto z = stream.normal_pair();
        c[j] = mu + z[0];
        if (j + 1 < spec.n) c[j + 1] = mu + z[1];
      }
      break;
    case Distribution::uniform:
      for (std::size_t j = 0; j < spec.n; j += 2) {
        const auto u = stream.uniform_pair();
        c[j] = mu + std::numbers::sqrt3 * (2.0 * u[0] - 1.0);
        if (j + 1 < spec.n) c[j + 1] = mu + std::numbers::sqrt3 * (2.0 * u[1] - 1.0);
      }
      break;
    case Distribution::rademacher:
      for (std::size_t j = 0; j < spec.n; j += 64) {
        const std::uint64_t bits = stream.bits();
        for (std::size_t k = 0; k < 64 && j + k < spec.n; ++k) {
          c[j + k] = mu + (((bits >> k) & 1U) ? 1.0 : -1.0);
        }
      }
      break;
  }
  return Poly(std::move(c));
}

/// Scan step in t for a scaled window: 0.02 in units of v.
inline double scaled_grid_step(std::size_t n) { return 0.02 / static_cast<double>(n); }

/// Empirical scaled root density over the window of `spec`.
///
/// Bins are half-open [lo, hi); a root that lands exactly on v_hi goes to the
/// last bin so every root found in the window is binned once.
inline HistogramEstimate run_ensemble(const EnsembleSpec& spec, const RunOptions& opts = {}) {
  spec.validate();
  const double nn = static_cast<double>(spec.n);
  const double width = (spec.v_hi - spec.v_lo) / static_cast<double>(spec.bins);
  const double t_lo = spec.t_lo();
  const double t_hi = spec.t_hi();
  const double step = std::min(scaled_grid_step(spec.n), (t_hi - t_lo) / 16.0);

  struct Acc {
    std::vector<std::uint64_t> counts;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
  };
  const auto make = [&] { return Acc{std::vector<std::uint64_t>(spec.bins, 0), 0, 0}; };
  const auto body = [&](Acc& acc, std::uint64_t i) {
    const Poly p = sample_coefficients(spec, i);
    const RootReport rep = count_roots_scan(p, t_lo, t_hi, step);
    for (double t : rep.roots) {
      const double v = nn * (1.0 - t);
      auto bin = static_cast<std::ptrdiff_t>(std::floor((v - spec.v_lo) / width));
      bin = std::clamp<std::ptrdiff_t>(bin, 0, static_cast<std::ptrdiff_t>(spec.bins) - 1);
      ++acc.counts[static_cast<std::size_t>(bin)];
    }
    acc.sum += rep.count;
    acc.sum_sq += static_cast<std::uint64_t>(rep.count) * rep.count;
  };
  const auto merge = [](Acc& into, const Acc& from) {
    for (std::size_t b = 0; b < into.counts.size(); ++b) into.counts[b] += from.counts[b];
    into.sum += from.sum;
    into.sum_sq += from.sum_sq;
  };
  const Acc total = detail::parallel_reduce<Acc>(spec.reps, opts.workers, make, body, merge);

  HistogramEstimate h;
  h.reps_used = spec.reps;
  const double reps = static_cast<double>(spec.reps);
  h.bin_edges.resize(spec.bins + 1);
  for (std::size_t b = 0; b <= spec.bins; ++b) h.bin_edges[b] = spec.v_lo + static_cast<double>(b) * width;
  h.bin_edges.back() = spec.v_hi;
  h.counts = total.counts;
  h.density.resize(spec.bins);
  h.std_error.resize(spec.bins);
  for (std::size_t b = 0; b < spec.bins; ++b) {
    const double c = static_cast<double>(total.counts[b]);
    h.density[b] = c / (reps * width);
    h.std_error[b] = std::sqrt(c) / (reps * width);
  }
  const double s1 = static_cast<double>(total.sum);
  const double s2 = static_cast<double>(total.sum_sq);
  h.total_mean = s1 / reps;
  h.total_var = spec.reps > 1 ? (s2 - s1 * s1 / reps) / (reps - 1.0) : 0.0;
  return h;
}

/// Mean, variance and standard error of the number of real roots on the
/// whole line (count_roots_total with default grid), over spec.reps draws.
/// The window and bins of `spec` are ignored.
inline TotalCountStats run_total_count(const EnsembleSpec& spec, const RunOptions& opts = {}) {
  if (spec.n < 1) throw DomainError("run_total_count: n must be >= 1");
  if (spec.reps == 0) throw DomainError("run_total_count: reps must be positive");
  struct Acc {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
  };
  const auto body = [&](Acc& acc, std::uint64_t i) {
    const std::uint64_t k = count_roots_total(sample_coefficients(spec, i));
    acc.sum += k;
    acc.sum_sq += k * k;
  };
  const auto merge = [](Acc& into, const Acc& from) {
    into.sum += from.sum;
    into.sum_sq += from.sum_sq;
  };
  const Acc total = detail::parallel_reduce<Acc>(spec.reps, opts.workers, [] { return Acc{}; }, body, merge);
  const double reps = static_cast<double>(spec.reps);
  const double s1 = static_cast<double>(total.sum);
  const double s2 = static_cast<double>(total.sum_sq);
  TotalCountStats out;
  out.mean = s1 / reps;
  out.variance = spec.reps > 1 ? (s2 - s1 * s1 / reps) / (reps - 1.0) : 0.0;
  out.std_error = std::sqrt(out.variance / reps);
  return out;
}

}  // namespace kacroots
