#include <cmath>

#include <gtest/gtest.h>

#include "kacroots/special.hpp"

namespace sp = kacroots::special;

// Reference values from mpmath at 30 digits.
TEST(Dawson, ReferenceValues) {
  const struct { double x, f; } cases[] = {
      {0.1, 0.09933599239785287}, {0.5, 0.4244363835020223}, {1.0, 0.5380795069127684},
      {2.0, 0.3013403889237920},  {4.0, 0.1293480012360051}, {6.0, 0.08454268897454385},
      {10.0, 0.05025384718759853},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(sp::dawson(c.x), c.f, 1e-13 * c.f) << "x=" << c.x;
    EXPECT_EQ(sp::dawson(-c.x), -sp::dawson(c.x));
  }
  EXPECT_EQ(sp::dawson(0.0), 0.0);
}

TEST(Dawson, SatisfiesItsOde) {
  // D'(x) = 1 - 2 x D(x), checked by central differences across all branches
  const double h = 1e-5;
  for (double x = 0.05; x < 12.0; x += 0.173) {
    const double fd = (sp::dawson(x + h) - sp::dawson(x - h)) / (2 * h);
    EXPECT_NEAR(fd, 1.0 - 2.0 * x * sp::dawson(x), 1e-9) << "x=" << x;
  }
}

TEST(Dawson, ContinuousAtBranchSwitches) {
  for (double x : {0.2, 6.0}) {
    EXPECT_NEAR(sp::dawson(std::nextafter(x, 0.0)), sp::dawson(x), 1e-14);
  }
}

TEST(CschGap, LimitAndValues) {
  EXPECT_DOUBLE_EQ(sp::csch_gap(0.0), 1.0 / std::sqrt(3.0));
  for (double v : {1e-4, 5e-3, 0.02, 0.5, 1.0, 3.0, 10.0, 39.0, 41.0, 200.0}) {
    const long double lv = v;
    const long double direct = std::sqrt(1.0L / (lv * lv) - 1.0L / (std::sinh(lv) * std::sinh(lv)));
    // the long double form loses digits near 0, where the series is exact enough
    const double tol = v < 0.05 ? 1e-9 : 1e-14;
    EXPECT_NEAR(sp::csch_gap(v), static_cast<double>(direct), tol * static_cast<double>(direct)) << "v=" << v;
    EXPECT_EQ(sp::csch_gap(-v), sp::csch_gap(v));
  }
}

TEST(CschGap, TailIsComplement) {
  for (double v : {1.0, 2.5, 7.0, 20.0, 44.0}) {
    EXPECT_NEAR(sp::csch_gap_tail(v), 1.0 / v - sp::csch_gap(v), 1e-15 / v);
  }
  // far tail ~ 2 v e^{-2v}: below 1/v by many orders but still positive
  EXPECT_GT(sp::csch_gap_tail(40.0), 0.0);
  EXPECT_LT(sp::csch_gap_tail(40.0), 1e-30);
}

TEST(SinhMinusX, SeriesAndDirectAgree) {
  const double small = 1e-3;
  EXPECT_NEAR(sp::sinh_minus_x(small), std::pow(small, 3) / 6.0 + std::pow(small, 5) / 120.0 + std::pow(small, 7) / 5040.0,
              1e-28);
  for (double x : {0.3, 0.99, 1.0, 1.5, 4.0}) {
    const long double lx = x;
    EXPECT_NEAR(sp::sinh_minus_x(x), static_cast<double>(std::sinh(lx) - lx),
                1e-15 * std::abs(static_cast<double>(std::sinh(lx) - lx)) + 1e-30);
  }
}
