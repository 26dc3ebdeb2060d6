// kacroots: analytic real-root densities of random polynomials and the Monte
// Carlo ensembles that check them. Emits CSV (or JSON) for plotting.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kacroots/kacroots.hpp"

namespace {

using kacroots::DomainError;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) {
    double value = 0.0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), value);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw UsageError(std::string(flag) + ": cannot parse '" + part + "'");
    }
    out.push_back(value);
  }
  if (out.size() != expected) {
    throw UsageError(std::string(flag) + ": expected " + std::to_string(expected) + " ':'-separated numbers");
  }
  return out;
}

/// "lo:hi:points" -> evenly spaced points, both ends included.
std::vector<double> parse_grid(const std::string& text, const char* flag) {
  const auto g = parse_numbers(text, 3, flag);
  const double points = g[2];
  if (!(points >= 1.0) || points != std::floor(points)) throw UsageError(std::string(flag) + ": points must be a positive integer");
  if (g[1] < g[0]) throw UsageError(std::string(flag) + ": need lo <= hi");
  const auto k = static_cast<std::size_t>(points);
  if (k == 1) {
    if (g[0] != g[1]) throw UsageError(std::string(flag) + ": a single point needs lo == hi");
    return {g[0]};
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = g[0] + (g[1] - g[0]) * static_cast<double>(i) / static_cast<double>(k - 1);
  out.back() = g[1];
  return out;
}

/// "lo:hi:step" -> lo, lo + step, ... up to hi (inclusive within half a step).
std::vector<double> parse_range(const std::string& text, const char* flag) {
  const auto g = parse_numbers(text, 3, flag);
  if (!(g[2] > 0.0) || g[1] < g[0]) throw UsageError(std::string(flag) + ": need lo <= hi and step > 0");
  const auto k = static_cast<std::size_t>(std::floor((g[1] - g[0]) / g[2] + 0.5));
  std::vector<double> out(k + 1);
  for (std::size_t i = 0; i <= k; ++i) out[i] = g[0] + g[2] * static_cast<double>(i);
  return out;
}

/// A table written as CSV with a fixed header, or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // pre-formatted cells, "" = missing
};

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i >= row.size() || row[i].empty()) {
          obj[t.header[i]] = nullptr;
        } else {
          obj[t.header[i]] = nlohmann::ordered_json::parse(row[i]);
        }
      }
      arr.push_back(std::move(obj));
    }
    os << arr.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::string format = "csv";
  std::string out;
  unsigned workers = 0;
};

struct DensityArgs {
  std::size_t n = 100;
  double alpha = 0.0;
  std::string grid = "-15:15:601";
};

int cmd_density(const DensityArgs& a, const Common& c) {
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (!(a.alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
  const auto vs = parse_grid(a.grid, "--grid");
  Table t{{"v", "p_exact_n", "p_universal"}, {}};
  for (double v : vs) {
    t.rows.push_back({fmt(v), fmt(kacroots::finite_scaled_density(a.n, a.alpha, v)),
                      fmt(kacroots::density_alpha(a.alpha, v))});
  }
  Output out(c.out);
  write_table(t, c.format, out.stream());
  return 0;
}

struct SimulateArgs {
  std::size_t n = 100;
  std::string dist = "gaussian";
  double alpha = 0.0;
  std::uint64_t reps = 20000;
  bool full = false;
  std::string window = "-10:10";
  std::string window_t;
  std::size_t bins = 40;
  std::uint64_t seed = 42;
  std::string summary;
};

int cmd_simulate(const SimulateArgs& a, const Common& c) {
  kacroots::EnsembleSpec spec;
  spec.n = a.n;
  const auto dist = kacroots::parse_distribution(a.dist);
  if (!dist) throw UsageError("--dist must be gaussian, uniform or rademacher");
  spec.dist = *dist;
  spec.alpha = a.alpha;
  spec.reps = a.full ? 100000 : a.reps;
  spec.bins = a.bins;
  spec.seed = a.seed;
  if (!a.window_t.empty()) {
    const auto w = parse_numbers(a.window_t, 2, "--window-t");
    const double nn = static_cast<double>(a.n);
    spec.v_lo = nn * (1.0 - w[1]);
    spec.v_hi = nn * (1.0 - w[0]);
  } else {
    const auto w = parse_numbers(a.window, 2, "--window");
    spec.v_lo = w[0];
    spec.v_hi = w[1];
  }
  spec.validate();

  const auto start = std::chrono::steady_clock::now();
  const auto h = kacroots::run_ensemble(spec, {c.workers});
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Table t{{"v_lo", "v_hi", "count", "density", "stderr"}, {}};
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    t.rows.push_back({fmt(h.bin_edges[b]), fmt(h.bin_edges[b + 1]), std::to_string(h.counts[b]),
                      fmt(h.density[b]), fmt(h.std_error[b])});
  }
  Output out(c.out);
  write_table(t, c.format, out.stream());

  nlohmann::ordered_json summary;
  summary["total_mean"] = h.total_mean;
  summary["total_var"] = h.total_var;
  summary["reps"] = h.reps_used;
  summary["n"] = spec.n;
  summary["dist"] = std::string(kacroots::to_string(spec.dist));
  summary["alpha"] = spec.alpha;
  summary["seed"] = spec.seed;
  summary["wall_time"] = wall;
  if (a.summary.empty()) {
    std::cerr << summary.dump() << '\n';
  } else {
    Output s(a.summary);
    s.stream() << summary.dump() << '\n';
  }
  return 0;
}

int cmd_constant() {
  std::printf("%.9f\n", kacroots::wilkins_constant());
  return 0;
}

struct PeaksArgs {
  std::string alpha = "0:8:0.1";
  double v_max = 30.0;
};

int cmd_peaks(const PeaksArgs& a, const Common& c) {
  if (!(a.v_max >= 10.0)) throw UsageError("--vmax must be >= 10");
  const auto alphas = parse_range(a.alpha, "--alpha");
  for (double al : alphas) {
    if (!(al >= 0.0)) throw UsageError("--alpha values must be >= 0");
  }
  std::vector<std::vector<kacroots::Peak>> found;
  std::size_t most = 1;
  for (double al : alphas) {
    found.push_back(kacroots::find_peaks(al, a.v_max));
    most = std::max(most, found.back().size());
  }
  Table t;
  t.header.push_back("alpha");
  for (std::size_t k = 1; k <= most; ++k) {
    t.header.push_back("v_peak" + std::to_string(k));
    t.header.push_back("p_peak" + std::to_string(k));
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::vector<std::string> row{fmt(alphas[i])};
    for (std::size_t k = 0; k < most; ++k) {
      if (k < found[i].size()) {
        row.push_back(fmt(found[i][k].v));
        row.push_back(fmt(found[i][k].p));
      } else {
        row.push_back("");
        row.push_back("");
      }
    }
    t.rows.push_back(std::move(row));
  }
  Output out(c.out);
  write_table(t, c.format, out.stream());
  return 0;
}

struct ParametricArgs {
  std::string v = "1";
  bool estimate = false;
  std::size_t n = 100;
  std::string dist = "gaussian";
  std::uint64_t reps = 1000000;
  std::optional<double> t_center;
  std::optional<double> delta;
  std::uint64_t seed = 42;
};

int cmd_parametric(const ParametricArgs& a, const Common& c) {
  std::vector<double> vs;
  if (a.v.find(':') == std::string::npos) {
    vs = parse_numbers(a.v, 1, "--v");
  } else {
    vs = parse_grid(a.v, "--v");
  }
  for (double v : vs) {
    if (!(v > 0.0)) throw UsageError("--v values must be positive");
  }
  kacroots::PerturbationSpec spec;
  if (a.estimate) {
    const auto dist = kacroots::parse_distribution(a.dist);
    if (!dist) throw UsageError("--dist must be gaussian, uniform or rademacher");
    if (a.n < 2) throw UsageError("--n must be >= 2");
    spec.base.n = a.n;
    spec.base.dist = *dist;
    spec.base.reps = a.reps;
    spec.base.seed = a.seed;
    spec.t_center = a.t_center.value_or(1.0 - 5.0 / static_cast<double>(a.n));
    spec.delta = a.delta;
    if (a.reps == 0) throw UsageError("--reps must be positive");
  }
  Table t{{"v_param", "ratio"}, {}};
  if (a.estimate) {
    for (const char* h : {"mc_ratio", "mc_stderr", "delta", "nonzero_products"}) t.header.push_back(h);
  }
  for (double v : vs) {
    std::vector<std::string> row{fmt(v), fmt(kacroots::parametric_ratio(v))};
    if (a.estimate) {
      spec.v_param = v;
      const auto est = kacroots::estimate_parametric_ratio(spec, {c.workers});
      row.push_back(fmt(est.ratio));
      row.push_back(fmt(est.std_error));
      row.push_back(fmt(est.delta));
      row.push_back(std::to_string(est.nonzero_products));
    }
    t.rows.push_back(std::move(row));
  }
  Output out(c.out);
  write_table(t, c.format, out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real roots of random Kac polynomials: analytic densities and Monte Carlo checks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read key=value options from a file (flags override it)");

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", common.out, "Output path (default: standard output)");
  };
  const auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "Worker threads (0 = all cores); never changes results")
        ->envname("KACROOTS_WORKERS");
  };

  DensityArgs density;
  auto* sub_density = app.add_subcommand("density", "Scaled finite-n and universal densities on a v grid");
  sub_density->add_option("--n", density.n, "Number of coefficients");
  sub_density->add_option("--alpha", density.alpha, "Scaled squared mean n * mu^2");
  sub_density->add_option("--grid", density.grid, "lo:hi:points in v");
  add_common(sub_density);

  SimulateArgs sim;
  auto* sub_sim = app.add_subcommand("simulate", "Monte Carlo histogram of scaled root positions");
  sub_sim->add_option("--n", sim.n, "Number of coefficients");
  sub_sim->add_option("--dist", sim.dist, "gaussian | uniform | rademacher");
  sub_sim->add_option("--alpha", sim.alpha, "Scaled squared mean n * mu^2");
  sub_sim->add_option("--reps", sim.reps, "Realizations");
  sub_sim->add_flag("--full", sim.full, "Use 100000 realizations");
  auto* win = sub_sim->add_option("--window", sim.window, "v_lo:v_hi");
  sub_sim->add_option("--window-t", sim.window_t, "t_lo:t_hi (converted to v)")->excludes(win);
  sub_sim->add_option("--bins", sim.bins, "Histogram bins");
  sub_sim->add_option("--seed", sim.seed, "Master seed");
  sub_sim->add_option("--summary", sim.summary, "Write the JSON summary line here instead of stderr");
  add_common(sub_sim);
  add_workers(sub_sim);

  app.add_subcommand("constant", "Print the constant term of the expected real-root count");

  PeaksArgs peaks;
  auto* sub_peaks = app.add_subcommand("peaks", "Local maxima of the universal density over an alpha scan");
  sub_peaks->add_option("--alpha", peaks.alpha, "lo:hi:step");
  sub_peaks->add_option("--vmax", peaks.v_max, "Scan [0, vmax]");
  add_common(sub_peaks);

  ParametricArgs par;
  auto* sub_par = app.add_subcommand("parametric", "Parametric correlation ratio, analytic and Monte Carlo");
  sub_par->add_option("--v", par.v, "Perturbation magnitude v or lo:hi:points");
  sub_par->add_flag("--estimate", par.estimate, "Add the Monte Carlo coincidence estimate");
  sub_par->add_option("--n", par.n, "Number of coefficients");
  sub_par->add_option("--dist", par.dist, "Base distribution");
  sub_par->add_option("--reps", par.reps, "Realizations");
  sub_par->add_option("--t-center", par.t_center, "Window centre in t (default 1 - 5/n)");
  sub_par->add_option("--delta", par.delta, "Window half-width in t");
  sub_par->add_option("--seed", par.seed, "Master seed");
  add_common(sub_par);
  add_workers(sub_par);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sub_density->parsed()) return cmd_density(density, common);
    if (sub_sim->parsed()) return cmd_simulate(sim, common);
    if (app.got_subcommand("constant")) return cmd_constant();
    if (sub_peaks->parsed()) return cmd_peaks(peaks, common);
    if (sub_par->parsed()) return cmd_parametric(par, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kacroots::OverflowPolicyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kacroots::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
