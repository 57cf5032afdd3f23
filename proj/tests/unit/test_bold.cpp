#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rcc/bold.hpp"
#include "rcc/error.hpp"
#include "support/bold_oracle.hpp"
#include "support/generators.hpp"

using namespace rcc;
using rcc::testing::Gen;

TEST(Bold, MatchesBruteForceOnRandomMatrices) {
  Gen gen(2024);
  const std::vector<double> icrf = rcc::testing::gamma_curve(2.2, 1024);
  for (int t = 0; t < 100; ++t) {
    const auto w = gen.matrix(5, 8);
    BoldParams p;
    p.lambda1 = gen.uniform(0.0, 2.0);
    p.lambda2 = gen.uniform(0.0, 20.0);
    p.normalise_distances = t % 2 == 0;
    const auto oracle = rcc::testing::oracle_bold(w, icrf, p.lambda1, p.lambda2, p.samples,
                                                  p.normalise_distances);
    const BoldBreakdown got = evaluate_candidate(CcpMatrix(w), icrf, p);
    auto tol = [](double v) { return 1e-9 * std::max(1.0, std::abs(v)); };
    EXPECT_NEAR(got.bold, oracle.bold, tol(oracle.bold));
    EXPECT_NEAR(got.eta, oracle.eta, tol(oracle.eta));
    EXPECT_NEAR(got.phi, oracle.phi, tol(oracle.phi));
    EXPECT_NEAR(got.mu, oracle.mu, tol(oracle.mu));
  }
}

TEST(Bold, SymmetricCurveHasZeroSkew) {
  // Uniform samples of a triangle are uniformly distributed values.
  const std::vector<double> d{0.1, 0.2, 0.3, 0.4, 0.3, 0.2, 0.1};
  const BoldBreakdown b = bold_value(d, BoldParams{});
  EXPECT_NEAR(b.eta, 0.0, 1e-9);
  EXPECT_NEAR(b.phi, 0.5 - 1.0, 1e-15);
  EXPECT_NEAR(b.mu, 1.6, 1e-15);
  // A mirror-symmetric but non-linear bump does not have symmetric values.
  const std::vector<double> bump{0.0, 0.1, 0.3, 0.45, 0.3, 0.1, 0.0};
  EXPECT_GT(std::abs(bold_value(bump, BoldParams{}).eta), 0.01);
}

TEST(Bold, ConstantCurveTakesDegenerateBranch) {
  const std::vector<double> d(6, 0.2);
  EXPECT_DOUBLE_EQ(bold_value(d, BoldParams{}).eta, 0.0);
  EXPECT_DOUBLE_EQ(sample_skewness(d), 0.0);
}

TEST(Bold, SkewnessAgreesWithClosedForm) {
  // Two-point sample {0,0,1}: mean 1/3, m2 = 2/9, m3 = 2/27.
  const std::vector<double> x{0.0, 0.0, 1.0};
  EXPECT_NEAR(sample_skewness(x), (2.0 / 27.0) / std::pow(2.0 / 9.0, 1.5), 1e-14);
}

TEST(Bold, SortIsStable) {
  const CcpMatrix w({{0.5, 0.2, 0.5, 0.1}, {0.5, 0.2, 0.5, 0.1}});
  const CcpMatrix w2({{0.5, 0.2, 0.4, 0.1}, {0.5, 0.2, 0.6, 0.1}});
  const CcpMatrix s = sort_columns(w2);
  EXPECT_DOUBLE_EQ(s(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(s(0, 3), 0.4);
  EXPECT_DOUBLE_EQ(sort_columns(w)(1, 0), 0.1);
}

TEST(Bold, AlignmentPinsEndColumns) {
  Gen gen(3);
  const CcpMatrix w(gen.matrix(6, 9));
  const RowAlignment a = align_rows(sort_columns(w));
  const auto means = a.aligned.column_means();
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.aligned(i, 0), a.aligned(0, 0));
    EXPECT_EQ(a.aligned(i, 8), a.aligned(0, 8));
  }
  EXPECT_NEAR(means.front(), a.aligned(0, 0), 1e-15);
}

TEST(Bold, DegenerateRowThrows) {
  const CcpMatrix w({{0.1, 0.4, 0.8}, {0.3, 0.3, 0.3}});
  try {
    align_rows(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_row);
  }
}

TEST(Bold, LinearisationDomainChecked) {
  const CcpMatrix w({{0.1, 0.4, 1.2}, {0.2, 0.3, 0.5}});
  EXPECT_THROW(linearise_ccps(w, ResponseCurve::identity(16)), Error);
}

TEST(Bold, TooFewPatchesRejected) {
  EXPECT_THROW(bold_value(std::vector<double>{0.1, 0.2}, BoldParams{}), Error);
  BoldParams bad;
  bad.samples = 2;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.lambda2 = -1.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Bold, AllEntriesSourceUsesEveryDistance) {
  Gen gen(9);
  const auto w = gen.matrix(4, 6);
  BoldParams p;
  p.source = SkewSource::all_entries;
  const BoldBreakdown b = evaluate_candidate(CcpMatrix(w), ResponseCurve::identity(), p);
  const DistanceCurves dc =
      mean_distance_curve(align_rows(sort_columns(CcpMatrix(w))).aligned, true);
  EXPECT_NEAR(b.eta, sample_skewness(dc.distances.values()), 1e-15);
}

TEST(Bold, LinearResponseBeatsDistortedOnSkew) {
  // Proportional rows under the identity response align exactly; push them
  // through a strong gamma and the distance curve grows lopsided.
  Gen gen(77);
  std::vector<double> abs_lin, abs_dist;
  const std::vector<double> distort = rcc::testing::gamma_curve(1.0 / 3.0, 1024);
  for (int s = 0; s < 30; ++s) {
    std::vector<double> refl(10);
    for (double& r : refl) r = gen.uniform(0.05, 0.95);
    std::vector<std::vector<double>> lin, dist;
    for (int i = 0; i < 6; ++i) {
      const double g = gen.uniform(0.3, 1.0);
      std::vector<double> a, b;
      for (double r : refl) {
        const double v = std::clamp(g * r + 0.01 * gen.normal(), 0.0, 1.0);
        a.push_back(v);
        b.push_back(rcc::testing::oracle_interp(distort, v));
      }
      lin.push_back(a);
      dist.push_back(b);
    }
    const ResponseCurve id = ResponseCurve::identity();
    abs_lin.push_back(std::abs(evaluate_candidate(CcpMatrix(lin), id, {}).eta));
    abs_dist.push_back(std::abs(evaluate_candidate(CcpMatrix(dist), id, {}).eta));
  }
  std::sort(abs_lin.begin(), abs_lin.end());
  std::sort(abs_dist.begin(), abs_dist.end());
  EXPECT_LT(0.5 * (abs_lin[14] + abs_lin[15]), 0.5 * (abs_dist[14] + abs_dist[15]));
}

TEST(Bold, DistanceCsvHasOneRowPerColumn) {
  BoldBreakdown b;
  b.mean_distance = {0.0, 0.5, 0.0};
  std::ostringstream out;
  write_distance_csv(out, b);
  EXPECT_EQ(out.str(), "column,mean_distance\n0,0\n1,0.5\n2,0\n");
}
