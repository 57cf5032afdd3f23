#include <gtest/gtest.h>

#include <cmath>

#include "rcc/error.hpp"
#include "rcc/surrogate.hpp"
#include "rcc/synthetic.hpp"

using namespace rcc;

TEST(Synthetic, LinearRowsAreProportional) {
  RandomSceneOptions o;
  o.noise_sigma = 0.0;
  o.gain_max = 0.9;
  const SyntheticScene s = generate_scene(random_scene_spec(o, ResponseCurve::identity(), 5));
  const SyntheticSceneSpec spec = random_scene_spec(o, ResponseCurve::identity(), 5);
  for (std::size_t i = 1; i < s.linear.size(); ++i) {
    for (std::size_t p = 0; p < s.linear[i].size(); ++p) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(s.linear[i][p][c] / s.linear[0][p][c], spec.gains[i][c] / spec.gains[0][c], 1e-12);
      }
    }
  }
}

TEST(Synthetic, ObservedIsCrfOfLinearWithoutNoise) {
  const DorfDatabase db = surrogate_dorf(7, 20);
  RandomSceneOptions o;
  o.noise_sigma = 0.0;
  const SyntheticScene s = generate_scene(random_scene_spec(o, db.curve(5), 2));
  for (std::size_t i = 0; i < s.images.size(); ++i) {
    for (std::size_t p = 0; p < s.observed[i].size(); ++p) {
      EXPECT_NEAR(s.observed[i][p].g, db.curve(5)(s.linear[i][p].g), 1e-12);
      const auto& r = s.annotations[i][p].region;
      EXPECT_NEAR(s.images[i].at(r.x + 1, r.y + 1).g, s.observed[i][p].g, 1e-12);
    }
  }
}

TEST(Synthetic, SeedDeterminesScene) {
  RandomSceneOptions o;
  const auto a = generate_scene(random_scene_spec(o, ResponseCurve::identity(), 9));
  const auto b = generate_scene(random_scene_spec(o, ResponseCurve::identity(), 9));
  const auto c = generate_scene(random_scene_spec(o, ResponseCurve::identity(), 10));
  EXPECT_EQ(a.images, b.images);
  EXPECT_NE(a.images, c.images);
}

TEST(Synthetic, GainsRespectBounds) {
  RandomSceneOptions o;
  o.images = 50;
  o.tint = 0.3;
  const SyntheticSceneSpec spec = random_scene_spec(o, ResponseCurve::identity(), 4);
  for (const Rgb& g : spec.gains) {
    for (int c = 0; c < 3; ++c) {
      EXPECT_GE(g[c], o.gain_min);
      EXPECT_LE(g[c], o.gain_max);
    }
  }
}

TEST(Synthetic, GridAnnotationsDoNotOverlap) {
  const auto anns = grid_annotations(24, 8, 2, 6, "x");
  ASSERT_EQ(anns.size(), 24u);
  EXPECT_EQ(anns[7].region, (Rect{12, 12, 8, 8}));
  EXPECT_EQ(anns[0].image_id, "x");
}

TEST(Synthetic, SpecValidation) {
  SyntheticSceneSpec spec;
  EXPECT_THROW(spec.validate(), Error);
  spec.gains = {{0.5, 0.5, 0.5}};
  spec.reflectances = {{0.5, 0.5, 0.5}};
  spec.offsets = {0.1, 0.2};
  EXPECT_THROW(spec.validate(), Error);
  spec.offsets.clear();
  spec.noise_sigma = -1.0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Synthetic, ColorCheckerValues) {
  const auto& cc = colorchecker_reflectances();
  // White patch (243,243,242) decodes to roughly 0.896 linear.
  EXPECT_NEAR(cc[18].r, 0.896, 0.002);
  EXPECT_LT(cc[23].g, 0.04);
}

TEST(RecoveryStudy, ReproducibleUnderSeed) {
  const DorfDatabase db = surrogate_dorf(7, 40);
  RandomSceneOptions o;
  const auto a = recovery_study(db, 3, o, {}, 11, 0.02, 2);
  const auto b = recovery_study(db, 3, o, {}, 11, 0.02, 1);
  ASSERT_EQ(a.trials.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(a.trials[t].true_index, b.trials[t].true_index);
    EXPECT_EQ(a.trials[t].selected_index, b.trials[t].selected_index);
    EXPECT_DOUBLE_EQ(a.trials[t].deviation, b.trials[t].deviation);
  }
}
