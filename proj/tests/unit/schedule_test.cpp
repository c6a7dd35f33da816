#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "adaptudf/error.hpp"
#include "adaptudf/schedule.hpp"
#include "test_support.hpp"

namespace adaptudf {
namespace {

RadiusSchedule sample_schedule() {
  RadiusSchedule s;
  s.sigma10 = 0.01;
  s.sigma40 = 0.04;
  s.sigma60 = 0.08;
  s.sigma90 = 0.2;
  return s;
}

TEST(Schedule, PhaseValues) {
  const RadiusSchedule s = sample_schedule();
  EXPECT_EQ(scale_factor(s, 0.0), s.s_max);
  EXPECT_EQ(scale_factor(s, s.sigma10), s.s_max);
  EXPECT_EQ(scale_factor(s, s.sigma40), 1.0);
  EXPECT_EQ(scale_factor(s, 0.06), 1.0);
  EXPECT_EQ(scale_factor(s, s.sigma90), s.s_min);
  EXPECT_EQ(scale_factor(s, 1.0 / 3.0), s.s_min);
  // Midpoint of the dilation ramp: 1 + (s_max - 1) * (1 - 0.5^alpha)
  EXPECT_NEAR(scale_factor(s, 0.025), 1.0 + 0.35 * (1.0 - std::sqrt(0.5)), 1e-15);
  // Midpoint of the shrink ramp: 1 - (1 - s_min) * 0.5^beta
  EXPECT_NEAR(scale_factor(s, 0.14), 1.0 - (1.0 / 3.0) * std::pow(0.5, 1.5), 1e-15);
  EXPECT_NEAR(radius(s, 1.0), s.r0 * s.s_min, 1e-18);
}

TEST(Schedule, ContinuousAtBreakpoints) {
  const RadiusSchedule s = sample_schedule();
  for (double b : {s.sigma10, s.sigma40, s.sigma60, s.sigma90}) {
    const double below = std::nextafter(b, 0.0), above = std::nextafter(b, 1.0);
    EXPECT_NEAR(scale_factor(s, below), scale_factor(s, b), 1e-6) << b;
    EXPECT_NEAR(scale_factor(s, above), scale_factor(s, b), 1e-6) << b;
  }
}

TEST(Schedule, MonotoneAndBoundedOnRandomSchedules) {
  testing::Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    std::array<double, 4> b{rng.uniform(0, 0.3), rng.uniform(0, 0.3), rng.uniform(0, 0.3), rng.uniform(0, 0.3)};
    std::sort(b.begin(), b.end());
    RadiusSchedule s;
    s.sigma10 = b[0];
    s.sigma40 = b[1];
    s.sigma60 = b[2];
    s.sigma90 = b[3];
    for (int k = 0; k < 100; ++k) {
      double x = rng.uniform(0, 1.0 / 3.0), y = rng.uniform(0, 1.0 / 3.0);
      if (x > y) std::swap(x, y);
      const double fx = scale_factor(s, x), fy = scale_factor(s, y);
      EXPECT_GE(fx, fy);
      EXPECT_GE(fy, s.s_min);
      EXPECT_LE(fx, s.s_max);
    }
  }
}

TEST(Schedule, CollapsedBreakpointsGiveSteps) {
  RadiusSchedule s;  // all breakpoints 0
  EXPECT_EQ(scale_factor(s, 0.0), s.s_max);
  EXPECT_EQ(scale_factor(s, 1e-6), s.s_min);
  s.sigma60 = s.sigma90 = 0.1;
  EXPECT_EQ(scale_factor(s, 0.05), 1.0);
  EXPECT_EQ(scale_factor(s, 0.1), s.s_min);
}

TEST(Schedule, Validate) {
  EXPECT_NO_THROW(sample_schedule().validate());
  RadiusSchedule bad = sample_schedule();
  bad.sigma40 = 0.001;
  EXPECT_THROW(bad.validate(), Error);
  bad = sample_schedule();
  bad.s_min = 1.2;
  EXPECT_THROW(bad.validate(), Error);
  bad = sample_schedule();
  bad.r0 = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Schedule, FromPercentiles) {
  const auto s = RadiusSchedule::from_percentiles({0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(s.sigma40, 0.2);
  EXPECT_EQ(s.r0, 0.018);
}

TEST(Schedule, DefaultConstants) {
  const RadiusSchedule s;
  EXPECT_EQ(s.s_max, 1.35);
  EXPECT_EQ(s.s_min, 2.0 / 3.0);
  EXPECT_EQ(s.alpha, 0.5);
  EXPECT_EQ(s.beta, 1.5);
  EXPECT_EQ(s.r0, 0.018);
}

TEST(Schedule, WorkedValues) {
  const RadiusSchedule s = sample_schedule();
  EXPECT_NEAR(scale_factor(s, s.sigma10 + 0.25 * (s.sigma40 - s.sigma10)), 1.175, 1e-12);
  EXPECT_NEAR(scale_factor(s, s.sigma60 + 0.5 * (s.sigma90 - s.sigma60)), 0.88215, 1e-5);
  EXPECT_NEAR(radius(s, 0.0), 0.0243, 1e-15);
  EXPECT_NEAR(radius(s, 0.3), 0.012, 1e-15);
  EXPECT_EQ(radius(s, 0.05), 0.018);
}

// Continuity at a fixed offset: the power-beta ramp and the plateau edges stay
// within 1e-6 at 1e-9, while the square-root ramp at sigma10 has unbounded
// slope, so its jump at that offset is 0.35 * sqrt(1e-9 / (sigma40 - sigma10)).
TEST(Schedule, FixedOffsetContinuity) {
  const RadiusSchedule s = sample_schedule();
  const double eps = 1e-9;
  for (double b : {s.sigma40, s.sigma60, s.sigma90}) {
    EXPECT_LT(std::abs(scale_factor(s, b - eps) - scale_factor(s, b + eps)), 1e-6) << b;
  }
  const double jump = std::abs(scale_factor(s, s.sigma10 - eps) - scale_factor(s, s.sigma10 + eps));
  EXPECT_NEAR(jump, 0.35 * std::sqrt(eps / (s.sigma40 - s.sigma10)), 1e-9);
}

}  // namespace
}  // namespace adaptudf
