#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "rcc/error.hpp"
#include "rcc/ingest.hpp"
#include "rcc/surrogate.hpp"
#include "support/generators.hpp"

using namespace rcc;

namespace {

const char* kTwoCurves =
    "first.tif\n"
    "Green\n"
    "I =\n"
    "0 0.25 0.5\n"
    "0.75 1\n"
    "B =\n"
    "0 0.5 0.7 0.9 1\n"
    "second.tif\n"
    "Red\n"
    "I =\n"
    "0 0.1 0.5 1\n"
    "B =\n"
    "0 0.3 0.6 1\n";

}  // namespace

TEST(ParseDorf, LabelledMultiLineBlocks) {
  std::istringstream in(kTwoCurves);
  const DorfDatabase db = parse_dorf(in);
  ASSERT_EQ(db.size(), 2u);
  EXPECT_EQ(db.curve(0).name(), "first.tif");
  EXPECT_EQ(db.record(0).type, "Green");
  EXPECT_NEAR(db.curve(0).samples()[1], 0.5, 1e-12);
  // Non-uniform axis is resampled: at x = 1/3 the source interpolates
  // between (0.1, 0.3) and (0.5, 0.6).
  const double expected = 0.3 + (1.0 / 3.0 - 0.1) / 0.4 * 0.3;
  EXPECT_NEAR(db.curve(1).samples()[1], expected, 1e-12);
}

TEST(ParseDorf, UnlabelledSingleLineRuns) {
  std::istringstream in("c\nt\n0 0.5 1\n0 0.8 1\n");
  const DorfDatabase db = parse_dorf(in);
  ASSERT_EQ(db.size(), 1u);
  EXPECT_NEAR(db.curve(0).samples()[1], 0.8, 1e-12);
}

TEST(ParseDorf, NormalisesEndpointsAndRejectsBadCurves) {
  std::istringstream in(
      "scaled\nt\n0 0.5 1\n10 20 30\n"
      "wild\nt\n0 0.5 1\n0 0.9 0.5\n"
      "tiny\nt\n0 0.25 0.5 0.75 1\n0 0.5 0.49995 0.8 1\n");
  const DorfDatabase db = parse_dorf(in);
  ASSERT_EQ(db.size(), 2u);
  EXPECT_NEAR(db.curve(0).samples()[1], 0.5, 1e-12);
  EXPECT_EQ(db.curve(1).name(), "tiny");
  EXPECT_NEAR(db.curve(1).samples()[2], 0.5, 1e-12);
  ASSERT_EQ(db.warnings().size(), 1u);
  EXPECT_NE(db.warnings()[0].find("wild"), std::string::npos);
}

TEST(ParseDorf, StructuralErrorsThrow) {
  auto kind = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_dorf(in);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  EXPECT_EQ(kind(""), ErrorKind::parse);
  EXPECT_EQ(kind("c\nt\n0 0.5 1\n0 1\n"), ErrorKind::parse);
  EXPECT_EQ(kind("c\nt\n0 0.5 0.5 1\n0 0.2 0.3 1\n"), ErrorKind::parse);
  EXPECT_EQ(kind("c\nt\n0 0.5 1\n"), ErrorKind::parse);
}

TEST(ParseDorf, WriteParseRoundTrip) {
  const DorfDatabase db = surrogate_dorf(3, 12, 256);
  std::stringstream io;
  write_dorf(io, db);
  const DorfDatabase back = parse_dorf(io);
  ASSERT_EQ(back.size(), db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    EXPECT_EQ(back.curve(i).name(), db.curve(i).name());
    EXPECT_LT(max_absolute_deviation(back.curve(i), db.curve(i)), 1e-11);
  }
}

TEST(DorfDatabase, InverseCacheIsThreadSafe) {
  const DorfDatabase db = surrogate_dorf(3, 40, 256);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&db] {
      for (std::size_t i = 0; i < db.size(); ++i) (void)db.inverse(i);
    });
  }
  for (auto& th : threads) th.join();
  for (std::size_t i = 0; i < db.size(); ++i) EXPECT_EQ(db.inverse(i), invert_curve(db.curve(i)));
}

TEST(ParseEmor, BlocksAndRoundTrip) {
  const DorfDatabase db = surrogate_dorf(3, 30, 128);
  const EmorBasis basis = pca_basis(db, EmorKind::inverse, 4);
  std::stringstream io;
  write_emor(io, basis);
  const EmorBasis back = parse_emor(io, EmorKind::inverse);
  ASSERT_EQ(back.k(), 4u);
  ASSERT_EQ(back.samples(), basis.samples());
  for (std::size_t i = 0; i < basis.samples(); ++i) {
    EXPECT_NEAR(back.mean[i], basis.mean[i], 1e-11);
    EXPECT_NEAR(back.eigenvectors[3][i], basis.eigenvectors[3][i], 1e-11);
  }
}

TEST(ParseEmor, LabelledInlineValues) {
  std::istringstream in("E = 0 0.5 1\nf0 = 0 0.6 1\nh(1)= 0 0.1 0\nh(2)=\n0 -0.1\n0\n");
  const EmorBasis b = parse_emor(in, EmorKind::forward);
  ASSERT_EQ(b.k(), 2u);
  EXPECT_DOUBLE_EQ(b.mean[1], 0.6);
  EXPECT_DOUBLE_EQ(b.eigenvectors[1][1], -0.1);
}

TEST(CurveJson, RoundTrip) {
  const ResponseCurve c("gamma", rcc::testing::gamma_curve(0.45, 33));
  EXPECT_EQ(curve_from_json(curve_to_json(c)), c);
  EXPECT_THROW(curve_from_json("{\"name\": 3}"), Error);
}
