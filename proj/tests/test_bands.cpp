#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "hillspec/spectral.hpp"

using namespace hillspec;

namespace {

using Interval = std::pair<double, double>;

void expect_leading_bands(const BandChart& chart, const std::vector<Interval>& expected,
                          double tol) {
  ASSERT_GE(chart.intervals.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(chart.intervals[i].left.lambda, expected[i].first, tol) << "band " << i;
    EXPECT_NEAR(chart.intervals[i].right.lambda, expected[i].second, tol) << "band " << i;
  }
}

void expect_ordered(const BandChart& chart) {
  for (std::size_t i = 0; i < chart.intervals.size(); ++i) {
    EXPECT_LT(chart.intervals[i].left.lambda, chart.intervals[i].right.lambda);
    if (i > 0) {
      EXPECT_LT(chart.intervals[i - 1].right.lambda, chart.intervals[i].left.lambda);
    }
  }
}

}  // namespace

TEST(FindBands, MathieuLeadingIntervals) {
  const auto chart = find_bands(builtin("mathieu"), {-1.0, 2.5});
  expect_leading_bands(chart,
                       {{-0.378489, -0.347669}, {0.594800, 0.918058}, {1.293166, 2.285157}},
                       1e-6);
  expect_ordered(chart);
}

TEST(FindBands, Ex2) {
  const auto chart = find_bands(builtin("ex2"), {2.0, 4.0});
  expect_leading_bands(chart, {{2.250000, 2.548882}, {3.055360, 3.941647}}, 1e-6);
}

TEST(FindBands, Ex4) {
  const auto chart = find_bands(builtin("ex4"), {0.0, 1.0});
  expect_leading_bands(chart, {{0.106301, 0.247914}, {0.503181, 0.995282}}, 1e-6);
}

TEST(FindBands, Ex5FirstIntervalAgainstIndependentValues) {
  // Reference edges from a Fourier (Hill determinant) computation.
  const auto chart = find_bands(builtin("ex5"), {-1.0, -0.3});
  expect_leading_bands(chart, {{-0.4195370, -0.3916454}}, 1e-6);
}

TEST(FindBands, FreeEquationHasNoGaps) {
  const auto p = PeriodicPotential::constant(0.0, 2 * std::numbers::pi);
  const auto chart = find_bands(p, {0.0, 5.0});
  ASSERT_EQ(chart.intervals.size(), 1u);
  EXPECT_NEAR(chart.intervals[0].left.lambda, 0.0, 1e-9);
  EXPECT_EQ(chart.intervals[0].right.lambda, 5.0);
  EXPECT_EQ(chart.intervals[0].right.tag, EdgeTag::range_limit);
}

TEST(FindBands, EvenPotentialEdgesAreIndeterminate) {
  for (const char* name : {"mathieu", "ex3", "ex4"}) {
    const auto chart = find_bands(builtin(name), {-1.0, 6.0});
    ASSERT_FALSE(chart.intervals.empty());
    for (const auto& band : chart.intervals) {
      for (const auto& edge : {band.left, band.right}) {
        if (edge.tag == EdgeTag::range_limit) continue;
        EXPECT_TRUE(edge.tag == EdgeTag::dirichlet_indeterminate ||
                    edge.tag == EdgeTag::neumann_indeterminate)
            << name << " edge " << edge.lambda;
      }
    }
  }
}

TEST(FindBands, MathieuEdgeTagsMatchBoundaryType) {
  const auto chart = find_bands(builtin("mathieu"), {-1.0, 2.5});
  ASSERT_GE(chart.intervals.size(), 3u);
  EXPECT_EQ(chart.intervals[0].left.tag, EdgeTag::neumann_indeterminate);
  EXPECT_EQ(chart.intervals[0].right.tag, EdgeTag::dirichlet_indeterminate);
  EXPECT_EQ(chart.intervals[1].right.tag, EdgeTag::dirichlet_indeterminate);
}

TEST(FindBands, NarrowGapBetweenGridPoints) {
  // The Mathieu gap (6.270837, 6.270945) is far narrower than the grid step.
  BandSearchOptions opt;
  opt.scan_points = 50;
  const auto chart = find_bands(builtin("mathieu"), {6.0, 6.5}, opt);
  ASSERT_EQ(chart.intervals.size(), 2u);
  EXPECT_NEAR(chart.intervals[0].right.lambda, 6.270837, 1e-6);
  EXPECT_NEAR(chart.intervals[1].left.lambda, 6.270945, 1e-6);
}

TEST(FindBands, BisectionHalvesEachStep) {
  BandSearchOptions opt;
  opt.scan_points = 100;
  opt.edge_tol = 1e-9;
  std::vector<double> widths;
  opt.trace = [&](double lo, double hi) { widths.push_back(hi - lo); };
  find_bands(builtin("ex2"), {2.2, 2.3}, opt);
  ASSERT_GT(widths.size(), 5u);
  for (std::size_t i = 1; i < widths.size(); ++i) {
    if (widths[i] > widths[i - 1]) continue;  // next edge started
    EXPECT_NEAR(widths[i], widths[i - 1] / 2, 1e-15);
  }
  EXPECT_LE(widths.back(), 1e-9);
}

TEST(FindBands, ThreadsGiveIdenticalCharts) {
  BandSearchOptions serial;
  BandSearchOptions threaded;
  threaded.threads = 4;
  const auto a = find_bands(builtin("ex4"), {0.0, 3.0}, serial);
  const auto b = find_bands(builtin("ex4"), {0.0, 3.0}, threaded);
  ASSERT_EQ(a.intervals.size(), b.intervals.size());
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    EXPECT_EQ(a.intervals[i].left.lambda, b.intervals[i].left.lambda);
    EXPECT_EQ(a.intervals[i].right.lambda, b.intervals[i].right.lambda);
  }
}

TEST(FindBands, RejectsBadArguments) {
  EXPECT_THROW(find_bands(builtin("ex2"), {1.0, 1.0}), std::invalid_argument);
  BandSearchOptions opt;
  opt.scan_points = 1;
  EXPECT_THROW(find_bands(builtin("ex2"), {0.0, 1.0}, opt), std::invalid_argument);
}
