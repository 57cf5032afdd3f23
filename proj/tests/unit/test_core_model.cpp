#include <gtest/gtest.h>

#include <cmath>

#include "rcc/ccp.hpp"
#include "rcc/color.hpp"
#include "rcc/curve.hpp"
#include "rcc/error.hpp"
#include "rcc/image.hpp"
#include "support/generators.hpp"

using namespace rcc;
using rcc::testing::Gen;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected rcc::Error";
  return ErrorKind::io;
}

}  // namespace

TEST(Chromaticity, SumsToOneAndRejectsBlack) {
  const Chromaticity c = chromaticity({0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(c.r, 0.2);
  EXPECT_DOUBLE_EQ(c.b, 0.5);
  EXPECT_NEAR(c.g(), 0.3, 1e-15);
  EXPECT_EQ(kind_of([] { chromaticity({0, 0, 0}); }), ErrorKind::zero_intensity);
}

TEST(ColorPatchSample, BlackUsesAchromaticPoint) {
  const auto s = ColorPatchSample::from_rgb({0, 0, 0});
  EXPECT_DOUBLE_EQ(s.chroma_r, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.chroma_b, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.intensity, 0.0);
  const auto t = ColorPatchSample::from_rgb({0.3, 0.6, 0.9});
  EXPECT_NEAR(t.intensity, 0.6, 1e-15);
  EXPECT_NEAR(t.chroma_r, 0.3 / 1.8, 1e-15);
}

TEST(ImageBuffer, ClampsOnWriteAndChecksBounds) {
  ImageBuffer img(3, 2);
  img.set(1, 1, {1.5, -0.2, 0.4});
  EXPECT_EQ(img.at(1, 1), (Rgb{1.0, 0.0, 0.4}));
  EXPECT_EQ(kind_of([&] { img.at(3, 0); }), ErrorKind::bounds);
}

TEST(ExtractPatch, MeanAndTrimmedMean) {
  ImageBuffer img(4, 1);
  img.set(0, 0, {0.1, 0.1, 0.1});
  img.set(1, 0, {0.2, 0.2, 0.2});
  img.set(2, 0, {0.3, 0.3, 0.3});
  img.set(3, 0, {1.0, 1.0, 1.0});
  const PatchAnnotation ann{"a", 0, {0, 0, 4, 1}};
  EXPECT_NEAR(extract_patch(img, ann).rgb.r, 0.4, 1e-12);
  EXPECT_NEAR(extract_patch(img, ann, {0.25}).rgb.r, 0.25, 1e-12);
}

TEST(ValidateAnnotations, RejectsOutOfBoundsAndDuplicates) {
  ImageBuffer img(10, 10);
  const std::vector<PatchAnnotation> outside{{"a", 0, {8, 8, 4, 4}}};
  EXPECT_THROW(validate_annotations(img, outside), Error);
  const std::vector<PatchAnnotation> dup{{"a", 1, {0, 0, 2, 2}}, {"a", 1, {3, 3, 2, 2}}};
  EXPECT_THROW(validate_annotations(img, dup), Error);
  const std::vector<PatchAnnotation> empty_region{{"a", 0, {0, 0, 0, 2}}};
  EXPECT_THROW(validate_annotations(img, empty_region), Error);
}

TEST(CcpMatrix, RaggedAndNonFiniteRejected) {
  EXPECT_EQ(kind_of([] { CcpMatrix({{0.1, 0.2}, {0.3}}); }), ErrorKind::dimension);
  EXPECT_EQ(kind_of([] { CcpMatrix({{0.1, NAN}}); }), ErrorKind::domain);
  const CcpMatrix m({{0.1, 0.2}, {0.3, 0.6}});
  EXPECT_NEAR(m.column_means()[1], 0.4, 1e-15);
}

TEST(IntensityMatrix, UsesThirdOfSum) {
  std::vector<std::vector<ColorPatchSample>> s{
      {ColorPatchSample::from_rgb({0.3, 0.3, 0.3}), ColorPatchSample::from_rgb({0.6, 0.0, 0.0})}};
  const CcpMatrix w = intensity_matrix(s);
  EXPECT_NEAR(w(0, 0), 0.3, 1e-15);
  EXPECT_NEAR(w(0, 1), 0.2, 1e-15);
  s.push_back({ColorPatchSample::from_rgb({0.1, 0.1, 0.1})});
  EXPECT_EQ(kind_of([&] { intensity_matrix(s); }), ErrorKind::dimension);
}

TEST(ResponseCurve, ValidatesInvariants) {
  EXPECT_EQ(kind_of([] { ResponseCurve("x", {0.0, 0.7, 0.5, 1.0}); }), ErrorKind::monotonicity);
  EXPECT_THROW(ResponseCurve("x", {0.1, 0.5, 1.0}), Error);
  EXPECT_THROW(ResponseCurve("x", {0.0, 1.2, 1.0}), Error);
  EXPECT_NO_THROW(ResponseCurve("x", {0.0, 0.5, 0.5, 1.0}));
}

TEST(ResponseCurve, DomainChecked) {
  const ResponseCurve id = ResponseCurve::identity(11);
  EXPECT_NEAR(eval_curve(id, 0.37), 0.37, 1e-15);
  EXPECT_EQ(kind_of([&] { eval_curve(id, 1.01); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([&] { eval_curve(id, -0.01); }), ErrorKind::domain);
}

TEST(InvertCurve, RoundTripOnRandomCurves) {
  Gen gen(11);
  for (int t = 0; t < 20; ++t) {
    const ResponseCurve f("f", gen.monotone_curve(1024));
    const ResponseCurve g = invert_curve(f);
    // Independent check: g(f(x)) ~ x away from the ends.
    for (int k = 1; k < 50; ++k) {
      const double x = k / 50.0;
      EXPECT_NEAR(g(f(x)), x, 2e-3) << "trial " << t << " x " << x;
    }
  }
}

TEST(InvertCurve, GammaMatchesClosedForm) {
  const ResponseCurve f("g", rcc::testing::gamma_curve(1.0 / 2.2, 4096));
  const ResponseCurve g = invert_curve(f);
  for (int k = 0; k <= 20; ++k) {
    const double y = k / 20.0;
    EXPECT_NEAR(g(y), std::pow(y, 2.2), 2e-3);
  }
}

TEST(InvertCurve, FlatRunCollapsesToMidpoint) {
  const ResponseCurve f("flat", {0.0, 0.25, 0.5, 0.5, 0.5, 0.75, 1.0, 1.0, 1.0});
  const ResponseCurve g = invert_curve(f);
  EXPECT_NEAR(g(0.5), 0.375, 1e-12);
  EXPECT_NEAR(g(1.0), 1.0, 1e-12);
}

TEST(RepairMonotone, CumulativeMaxAndEndpoints) {
  const std::vector<double> raw{0.05, 0.3, 0.2, 0.6, 0.9};
  EXPECT_NEAR(monotonicity_violation(raw), 0.1, 1e-15);
  const ResponseCurve r = repair_monotone("r", raw);
  EXPECT_DOUBLE_EQ(r.samples().front(), 0.0);
  EXPECT_DOUBLE_EQ(r.samples().back(), 1.0);
  EXPECT_DOUBLE_EQ(monotonicity_violation(r.samples()), 0.0);
  EXPECT_NEAR(r.samples()[1], r.samples()[2], 1e-15);
}

TEST(Deviation, MeanAndMax) {
  const ResponseCurve a = ResponseCurve::identity(5);
  const ResponseCurve b("b", {0.0, 0.35, 0.5, 0.75, 1.0});
  EXPECT_NEAR(mean_absolute_deviation(a, b), 0.02, 1e-15);
  EXPECT_NEAR(max_absolute_deviation(a, b), 0.1, 1e-15);
}

TEST(Emor, ProjectionRecoversCoefficients) {
  Gen gen(5);
  EmorBasis basis;
  basis.mean = rcc::testing::gamma_curve(0.5, 64);
  for (int e = 0; e < 3; ++e) {
    std::vector<double> h(64);
    for (std::size_t i = 0; i < 64; ++i) h[i] = std::sin((e + 1) * M_PI * i / 63.0) * 0.05;
    basis.eigenvectors.push_back(h);
  }
  basis.validate();
  const EmorCoefficients theta{{0.3, -0.2, 0.1}};
  const std::vector<double> curve = emor_reconstruct(basis, theta);
  // Independent oracle: build mean + sum theta h by hand.
  for (std::size_t i = 0; i < 64; ++i) {
    double v = basis.mean[i];
    for (int e = 0; e < 3; ++e) v += theta.theta[e] * basis.eigenvectors[e][i];
    EXPECT_NEAR(curve[i], std::clamp(v, 0.0, 1.0), 1e-15);
  }
  const EmorCoefficients back = emor_project(basis, curve);
  for (int e = 0; e < 3; ++e) EXPECT_NEAR(back.theta[e], theta.theta[e], 1e-9);
  EXPECT_EQ(basis.truncated(2).k(), 2u);
}
