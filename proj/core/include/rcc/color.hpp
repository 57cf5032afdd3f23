#pragma once

#include <algorithm>
#include <cmath>

namespace rcc {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr double sum() const noexcept { return r + g + b; }
  constexpr double operator[](int channel) const noexcept {
    return channel == 0 ? r : (channel == 1 ? g : b);
  }
  constexpr double& operator[](int channel) noexcept {
    return channel == 0 ? r : (channel == 1 ? g : b);
  }
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline Rgb clamp01(Rgb c) noexcept {
  auto clamp = [](double v) { return std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0); };
  return {clamp(c.r), clamp(c.g), clamp(c.b)};
}

/// Blue-and-red chromaticity; green is implied as 1 - r - b.
struct Chromaticity {
  double r = 0.0;
  double b = 0.0;

  constexpr double g() const noexcept { return 1.0 - r - b; }
};

/// Throws Error(zero_intensity) when R+G+B == 0.
Chromaticity chromaticity(const Rgb& rgb);

/// Mean colour of one patch plus its intensity/chromaticity decomposition.
/// Intensity is normalised by 3 so it shares the [0,1] curve domain.
struct ColorPatchSample {
  Rgb rgb;
  double intensity = 0.0;
  double chroma_r = 0.0;
  double chroma_b = 0.0;

  /// Black samples get the achromatic point (1/3, 1/3).
  static ColorPatchSample from_rgb(const Rgb& rgb);

  double intensity_sum() const noexcept { return rgb.sum(); }
};

}  // namespace rcc
