#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rcc/color.hpp"

namespace rcc {

/// Row-major floating-point RGB raster. Channel values are kept in [0,1];
/// every mutating entry point clamps.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(std::size_t width, std::size_t height, Rgb fill = {});
  ImageBuffer(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  const Rgb& at(std::size_t x, std::size_t y) const;
  void set(std::size_t x, std::size_t y, const Rgb& value);

  std::span<const Rgb> pixels() const noexcept { return pixels_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Rgb> pixels_;
};

struct Rect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct PatchAnnotation {
  std::string image_id;
  int patch_id = 0;
  Rect region;

  friend bool operator==(const PatchAnnotation&, const PatchAnnotation&) = default;
};

struct PatchOptions {
  /// Fraction of samples dropped from each tail per channel before
  /// averaging. 0 gives the plain mean.
  double trim_fraction = 0.0;
};

ColorPatchSample extract_patch(const ImageBuffer& image, const PatchAnnotation& annotation,
                               const PatchOptions& options = {});

std::vector<ColorPatchSample> extract_patches(const ImageBuffer& image,
                                              std::span<const PatchAnnotation> annotations,
                                              const PatchOptions& options = {});

/// Throws unless every region is inside the image and patch ids are unique.
void validate_annotations(const ImageBuffer& image, std::span<const PatchAnnotation> annotations);

}  // namespace rcc
