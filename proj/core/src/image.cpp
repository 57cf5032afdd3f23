#include "rcc/image.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rcc/error.hpp"

namespace rcc {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, Rgb fill)
    : width_(width), height_(height), pixels_(width * height, clamp01(fill)) {}

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw Error(ErrorKind::dimension, "pixel count " + std::to_string(pixels_.size()) +
                                          " does not match " + std::to_string(width_) + "x" +
                                          std::to_string(height_));
  }
  for (Rgb& p : pixels_) p = clamp01(p);
}

const Rgb& ImageBuffer::at(std::size_t x, std::size_t y) const {
  if (x >= width_ || y >= height_) {
    throw Error(ErrorKind::bounds, "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                       ") outside image");
  }
  return pixels_[y * width_ + x];
}

void ImageBuffer::set(std::size_t x, std::size_t y, const Rgb& value) {
  if (x >= width_ || y >= height_) {
    throw Error(ErrorKind::bounds, "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                       ") outside image");
  }
  pixels_[y * width_ + x] = clamp01(value);
}

namespace {

void check_region(const ImageBuffer& image, const PatchAnnotation& annotation) {
  const Rect& r = annotation.region;
  if (r.w == 0 || r.h == 0) {
    throw Error(ErrorKind::degenerate_region,
                "patch " + std::to_string(annotation.patch_id) + " has zero area");
  }
  if (r.x + r.w > image.width() || r.y + r.h > image.height()) {
    throw Error(ErrorKind::bounds, "patch " + std::to_string(annotation.patch_id) +
                                       " of '" + annotation.image_id +
                                       "' extends outside the image");
  }
}

double trimmed_mean(std::vector<double>& values, double trim_fraction) {
  const auto drop = static_cast<std::size_t>(std::floor(trim_fraction * values.size()));
  if (drop == 0 || 2 * drop >= values.size()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (std::size_t i = drop; i < values.size() - drop; ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - 2 * drop);
}

}  // namespace

ColorPatchSample extract_patch(const ImageBuffer& image, const PatchAnnotation& annotation,
                               const PatchOptions& options) {
  check_region(image, annotation);
  const Rect& r = annotation.region;

  if (options.trim_fraction <= 0.0) {
    Rgb sum;
    for (std::size_t y = r.y; y < r.y + r.h; ++y) {
      for (std::size_t x = r.x; x < r.x + r.w; ++x) {
        const Rgb& p = image.at(x, y);
        sum.r += p.r;
        sum.g += p.g;
        sum.b += p.b;
      }
    }
    const double count = static_cast<double>(r.w * r.h);
    return ColorPatchSample::from_rgb({sum.r / count, sum.g / count, sum.b / count});
  }

  Rgb mean;
  std::vector<double> channel;
  channel.reserve(r.w * r.h);
  for (int c = 0; c < 3; ++c) {
    channel.clear();
    for (std::size_t y = r.y; y < r.y + r.h; ++y) {
      for (std::size_t x = r.x; x < r.x + r.w; ++x) channel.push_back(image.at(x, y)[c]);
    }
    mean[c] = trimmed_mean(channel, options.trim_fraction);
  }
  return ColorPatchSample::from_rgb(mean);
}

std::vector<ColorPatchSample> extract_patches(const ImageBuffer& image,
                                              std::span<const PatchAnnotation> annotations,
                                              const PatchOptions& options) {
  std::vector<ColorPatchSample> out;
  out.reserve(annotations.size());
  for (const PatchAnnotation& a : annotations) out.push_back(extract_patch(image, a, options));
  return out;
}

void validate_annotations(const ImageBuffer& image, std::span<const PatchAnnotation> annotations) {
  std::set<int> seen;
  for (const PatchAnnotation& a : annotations) {
    check_region(image, a);
    if (!seen.insert(a.patch_id).second) {
      throw Error(ErrorKind::configuration, "duplicate patch id " + std::to_string(a.patch_id) +
                                                " in '" + a.image_id + "'");
    }
  }
}

}  // namespace rcc
