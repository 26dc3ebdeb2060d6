#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string dir = testing::TempDir();
  const std::string out = dir + "kacroots_cli_out.txt";
  const std::string err = dir + "kacroots_cli_err.txt";
  const std::string cmd = env + " " KACROOTS_CLI_PATH " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

using Rows = std::vector<std::vector<std::string>>;

Rows parse_csv(const std::string& text, std::string* header = nullptr) {
  std::stringstream ss(text);
  std::string line;
  Rows rows;
  bool first = true;
  while (std::getline(ss, line)) {
    if (first) {
      if (header) *header = line;
      first = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

double num(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  EXPECT_EQ(res.ec, std::errc{}) << s;
  EXPECT_EQ(res.ptr, s.data() + s.size()) << s;
  return x;
}

}  // namespace

TEST(Cli, DensityGrid) {
  const auto r = run("density --n 100 --alpha 10 --grid -15:15:601");
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "v,p_exact_n,p_universal");
  ASSERT_EQ(rows.size(), 601u);
  EXPECT_EQ(num(rows.front()[0]), -15.0);
  EXPECT_EQ(num(rows.back()[0]), 15.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_NEAR(num(rows[k][2]), num(rows[rows.size() - 1 - k][2]), 1e-15);
  }
}

TEST(Cli, DensitySinglePoint) {
  const auto r = run("density --n 100 --alpha 0 --grid 0:0:1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(num(rows[0][2]), 0.091888, 5e-7);
}

TEST(Cli, DensityConvergesInN) {
  const auto small = parse_csv(run("density --n 100 --alpha 3 --grid -6:6:13").out);
  const auto large = parse_csv(run("density --n 1000 --alpha 3 --grid -6:6:13").out);
  ASSERT_EQ(small.size(), 13u);
  ASSERT_EQ(large.size(), 13u);
  for (std::size_t k = 0; k < small.size(); ++k) {
    const double e_small = std::abs(num(small[k][1]) - num(small[k][2]));
    const double e_large = std::abs(num(large[k][1]) - num(large[k][2]));
    EXPECT_LT(e_large, e_small) << "v=" << small[k][0];
  }
}

TEST(Cli, CsvRoundTrips) {
  const auto r = run("density --n 37 --alpha 2.5 --grid -3.3:7.1:41");
  ASSERT_EQ(r.code, 0);
  for (const auto& row : parse_csv(r.out)) {
    for (const auto& cell : row) {
      const double x = num(cell);
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, x);
      EXPECT_EQ(std::string(buf, res.ptr), cell);  // shortest round-trip form
      char full[64];
      std::snprintf(full, sizeof full, "%.17g", x);
      EXPECT_EQ(std::strtod(full, nullptr), x);
    }
  }
}

TEST(Cli, JsonFormat) {
  const auto r = run("density --n 50 --grid -1:1:3 --format json");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc[1]["v"].get<double>(), 0.0);
  EXPECT_GT(doc[1]["p_universal"].get<double>(), 0.09);
}

TEST(Cli, SimulateTableAndSummary) {
  const auto r = run("simulate --n 100 --dist gaussian --alpha 10 --reps 2000 --window -15:15 --bins 60 --seed 42");
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "v_lo,v_hi,count,density,stderr");
  ASSERT_EQ(rows.size(), 60u);
  double total = 0;
  for (const auto& row : rows) total += num(row[2]);
  const auto summary = nlohmann::json::parse(r.err);
  EXPECT_NEAR(summary["total_mean"].get<double>(), total / 2000.0, 1e-12);
  EXPECT_EQ(summary["seed"].get<int>(), 42);
  EXPECT_TRUE(summary.contains("total_var"));
  EXPECT_TRUE(summary.contains("wall_time"));
}

TEST(Cli, SimulateDeterministicAcrossWorkers) {
  const std::string base = "simulate --n 120 --dist uniform --alpha 4 --reps 3000 --bins 30 --seed 7";
  const std::string dir = testing::TempDir();
  ASSERT_EQ(run(base + " --workers 1 --out " + dir + "w1.csv").code, 0);
  ASSERT_EQ(run(base + " --workers 4 --out " + dir + "w4.csv").code, 0);
  ASSERT_EQ(run(base + " --out " + dir + "w_env.csv", "KACROOTS_WORKERS=3").code, 0);
  const std::string one = slurp(dir + "w1.csv");
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(one, slurp(dir + "w4.csv"));
  EXPECT_EQ(one, slurp(dir + "w_env.csv"));
}

TEST(Cli, SummaryFile) {
  const std::string path = testing::TempDir() + "summary.json";
  const auto r = run("simulate --n 50 --reps 500 --summary " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());
  EXPECT_EQ(nlohmann::json::parse(slurp(path))["reps"].get<int>(), 500);
}

TEST(Cli, CauchyQuartileWindow) {
  const auto r = run("simulate --n 2 --reps 100000 --window-t 0:1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(r.err);
  const double se = std::sqrt(summary["total_var"].get<double>() / 100000.0);
  EXPECT_NEAR(summary["total_mean"].get<double>(), 0.25, 3 * se);
}

TEST(Cli, Constant) {
  const auto r = run("constant");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.625735807\n");
}

TEST(Cli, PeaksTransition) {
  const auto r = run("peaks --alpha 0:8:0.1");
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header.rfind("alpha,v_peak1,p_peak1", 0), 0u);
  ASSERT_EQ(rows.size(), 81u);
  double last_at_origin = -1, first_off = -1;
  for (const auto& row : rows) {
    const double alpha = num(row[0]);
    if (num(row[1]) == 0.0) {
      last_at_origin = alpha;
    } else if (first_off < 0) {
      first_off = alpha;
    }
  }
  EXPECT_NEAR(last_at_origin, 1.2, 0.05);
  EXPECT_NEAR(first_off, 1.2, 0.15);
  EXPECT_LT(last_at_origin, first_off);
}

TEST(Cli, ParametricAnalytic) {
  const auto r = run("parametric --v 1");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(num(rows[0][1]), 1.785398, 5e-7);
}

TEST(Cli, ParametricEstimate) {
  const auto r = run("parametric --v 1 --estimate --reps 200000 --delta 0.01");
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "v_param,ratio,mc_ratio,mc_stderr,delta,nonzero_products");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(num(rows[0][3]), 0.0);
  EXPECT_NEAR(num(rows[0][2]), 1.785398, 5 * num(rows[0][3]) + 0.1 * 1.785398);
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string cfg = testing::TempDir() + "run.ini";
  {
    std::ofstream f(cfg);
    f << "[density]\nn=100\nalpha=0\ngrid=0:0:1\n";
  }
  auto r = run("--config " + cfg + " density");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(num(parse_csv(r.out)[0][2]), 0.091888, 5e-7);
  r = run("--config " + cfg + " density --alpha 10");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(num(parse_csv(r.out)[0][2]), 6.191374794027282e-4, 1e-15);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("nosuch").code, 2);
  EXPECT_EQ(run("density --bogus 1").code, 2);
  EXPECT_EQ(run("density --n 1").code, 2);
  EXPECT_EQ(run("density --alpha -1").code, 2);
  EXPECT_EQ(run("density --grid 1:0:5").code, 2);
  EXPECT_EQ(run("density --grid 0:1").code, 2);
  EXPECT_EQ(run("simulate --dist cauchy").code, 2);
  EXPECT_EQ(run("simulate --reps 0").code, 2);
  EXPECT_EQ(run("simulate --window -60:0").code, 2);
  EXPECT_EQ(run("simulate --window 0:x").code, 2);
  EXPECT_EQ(run("peaks --vmax 5").code, 2);
  EXPECT_EQ(run("parametric --v 0").code, 2);
  EXPECT_EQ(run("density --format xml").code, 2);
}

TEST(Cli, NumericalFailure) {
  // far too few coincidences for the estimator
  const auto r = run("parametric --v 1 --estimate --reps 100");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("nonzero products"), std::string::npos);
}

TEST(Cli, Help) { EXPECT_EQ(run("--help").code, 0); }
