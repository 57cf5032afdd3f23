#include <gtest/gtest.h>

#include <filesystem>

#include "rcc/error.hpp"
#include "rcc/image_io.hpp"
#include "support/generators.hpp"

using namespace rcc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / ("rcc_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                  ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(p);
  return p;
}

ImageBuffer random_image(std::uint64_t seed) {
  rcc::testing::Gen gen(seed);
  ImageBuffer img(7, 5);
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 7; ++x) img.set(x, y, gen.rgb());
  return img;
}

}  // namespace

TEST(Png, RoundTrip8And16Bit) {
  const fs::path dir = temp_dir();
  const ImageBuffer img = random_image(1);
  for (int depth : {8, 16}) {
    const std::string path = (dir / ("img" + std::to_string(depth) + ".png")).string();
    write_png(path, img, {{"seed", "42"}}, depth);
    const ImageBuffer back = read_image(path);
    ASSERT_EQ(back.width(), 7u);
    ASSERT_EQ(back.height(), 5u);
    const double step = depth == 8 ? 255.0 : 65535.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      EXPECT_NEAR(back.pixels()[i].r, img.pixels()[i].r, 0.5 / step + 1e-12);
      EXPECT_NEAR(back.pixels()[i].b, img.pixels()[i].b, 0.5 / step + 1e-12);
    }
    EXPECT_EQ(read_png_text(path).at("seed"), "42");
  }
  fs::remove_all(dir);
}

TEST(Png, ErrorsAreReported) {
  const fs::path dir = temp_dir();
  EXPECT_THROW(read_png((dir / "missing.png").string()), Error);
  write_text_file((dir / "junk.png").string(), "not a png");
  EXPECT_THROW(read_png((dir / "junk.png").string()), Error);
  EXPECT_THROW(read_image((dir / "file.bmp").string()), Error);
  EXPECT_THROW(write_png((dir / "x.png").string(), random_image(2), {}, 12), Error);
  fs::remove_all(dir);
}

TEST(Jpeg, BadFileRejected) {
  const fs::path dir = temp_dir();
  write_text_file((dir / "junk.jpg").string(), "not a jpeg");
  EXPECT_THROW(read_image((dir / "junk.jpg").string()), Error);
  fs::remove_all(dir);
}

TEST(Annotations, JsonRoundTrip) {
  const std::vector<PatchAnnotation> anns{{"a", 0, {1, 2, 3, 4}}, {"b", 5, {0, 0, 8, 8}}};
  EXPECT_EQ(annotations_from_json(annotations_to_json(anns)), anns);
  EXPECT_THROW(annotations_from_json("[{\"patch_id\": 1}]"), Error);
  EXPECT_THROW(annotations_from_json("{"), Error);
}

TEST(Jpeg, DecodesSolidFixture) {
  const ImageBuffer img = read_image(RCC_FIXTURE_DIR "/solid.jpg");
  ASSERT_EQ(img.width(), 16u);
  ASSERT_EQ(img.height(), 8u);
  const Rgb p = img.at(8, 4);
  EXPECT_NEAR(p.r * 255.0, 200.0, 3.0);
  EXPECT_NEAR(p.g * 255.0, 100.0, 3.0);
  EXPECT_NEAR(p.b * 255.0, 50.0, 3.0);
}

TEST(Png, GreyExpandsToRgb) {
  const ImageBuffer img = read_image(RCC_FIXTURE_DIR "/grey.png");
  EXPECT_EQ(img.at(1, 1), (Rgb{128 / 255.0, 128 / 255.0, 128 / 255.0}));
}
