#include "rcc/color.hpp"

#include "rcc/error.hpp"

namespace rcc {

Chromaticity chromaticity(const Rgb& rgb) {
  const double sum = rgb.sum();
  if (!(sum > 0.0)) {
    throw Error(ErrorKind::zero_intensity, "R+G+B must be positive to form chromaticity");
  }
  return {rgb.r / sum, rgb.b / sum};
}

ColorPatchSample ColorPatchSample::from_rgb(const Rgb& rgb) {
  ColorPatchSample sample;
  sample.rgb = rgb;
  sample.intensity = rgb.sum() / 3.0;
  if (rgb.sum() > 0.0) {
    const Chromaticity c = chromaticity(rgb);
    sample.chroma_r = c.r;
    sample.chroma_b = c.b;
  } else {
    sample.chroma_r = 1.0 / 3.0;
    sample.chroma_b = 1.0 / 3.0;
  }
  return sample;
}

}  // namespace rcc
