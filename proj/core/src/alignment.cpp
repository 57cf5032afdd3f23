#include "rcc/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "rcc/error.hpp"
#include "rcc/parallel.hpp"

namespace rcc {

namespace {

// Runs fn over row bands so each worker owns a disjoint slice of pixels.
template <typename Fn>
ImageBuffer map_pixels(const ImageBuffer& image, std::size_t workers, Fn fn) {
  std::vector<Rgb> out(image.size());
  const std::span<const Rgb> in = image.pixels();
  const std::size_t width = image.width();
  const std::size_t height = image.height();
  const std::size_t bands = std::max<std::size_t>(1, std::min(height, workers == 0 ? default_workers() : workers));
  parallel_for(bands, bands, [&](std::size_t band) {
    const std::size_t y0 = height * band / bands;
    const std::size_t y1 = height * (band + 1) / bands;
    for (std::size_t i = y0 * width; i < y1 * width; ++i) out[i] = fn(in[i]);
  });
  return ImageBuffer(width, height, std::move(out));
}

}  // namespace

Rgb linearise_rgb(const Rgb& rgb, const ResponseCurve& icrf, LinearisationMode mode) {
  const std::span<const double> f = icrf.samples();
  if (mode == LinearisationMode::per_channel) {
    return clamp01({interpolate_samples(f, rgb.r), interpolate_samples(f, rgb.g),
                    interpolate_samples(f, rgb.b)});
  }
  const double sum = rgb.sum();
  if (sum <= 0.0) return rgb;
  const double scale = 3.0 * interpolate_samples(f, std::clamp(sum / 3.0, 0.0, 1.0)) / sum;
  return clamp01({rgb.r * scale, rgb.g * scale, rgb.b * scale});
}

ImageBuffer linearise_image(const ImageBuffer& image, const ResponseCurve& icrf,
                            LinearisationMode mode, std::size_t workers) {
  return map_pixels(image, workers, [&](const Rgb& p) { return linearise_rgb(p, icrf, mode); });
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::dimension, "regression inputs differ in length");
  if (x.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "linear match needs at least 2 CCPs");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-300)) {
    throw Error(ErrorKind::degenerate_regression, "regressor has zero variance");
  }
  LineFit fit;
  fit.alpha = sxy / sxx;
  fit.beta = my - fit.alpha * mx;
  return fit;
}

MatchCoefficients fit_linear_match(std::span<const ColorPatchSample> source,
                                   std::span<const ColorPatchSample> target) {
  if (source.size() != target.size()) {
    throw Error(ErrorKind::dimension, "source and target CCP counts differ");
  }
  if (source.size() < 2) {
    throw Error(ErrorKind::insufficient_data, "linear match needs at least 2 CCPs");
  }
  const std::size_t n = source.size();
  std::vector<double> si(n), ti(n), sr(n), tr(n), sb(n), tb(n);
  for (std::size_t i = 0; i < n; ++i) {
    si[i] = source[i].intensity_sum();
    ti[i] = target[i].intensity_sum();
    sr[i] = source[i].chroma_r;
    tr[i] = target[i].chroma_r;
    sb[i] = source[i].chroma_b;
    tb[i] = target[i].chroma_b;
  }
  MatchCoefficients c;
  const LineFit fi = fit_line(si, ti);
  const LineFit fr = fit_line(sr, tr);
  const LineFit fb = fit_line(sb, tb);
  c.alpha_i = fi.alpha;
  c.beta_i = fi.beta;
  c.alpha_r = fr.alpha;
  c.beta_r = fr.beta;
  c.alpha_b = fb.alpha;
  c.beta_b = fb.beta;
  return c;
}

Rgb modify_intensity(const Rgb& pixel, double alpha_i, double beta_i) noexcept {
  if (pixel.sum() == 0.0) return pixel;
  const Rgb p{alpha_i * pixel.r, alpha_i * pixel.g, alpha_i * pixel.b};
  const double s = p.r + p.g + p.b;
  if (s == 0.0) return p;
  Rgb out;
  out.r = (s + beta_i) * p.r / s;
  out.b = (s + beta_i) * p.b / s;
  out.g = s + beta_i - out.r - out.b;
  return out;
}

Rgb modify_chromaticity(const Rgb& pixel, double alpha_r, double beta_r, double alpha_b,
                        double beta_b) noexcept {
  const double s = pixel.r + pixel.g + pixel.b;
  Rgb p;
  p.r = alpha_r * pixel.r;
  p.b = alpha_b * pixel.b;
  p.g = s - alpha_r * pixel.r - alpha_b * pixel.b;
  const double s2 = p.r + p.g + p.b;
  Rgb out;
  out.r = beta_r * s2 + p.r;
  out.b = beta_b * s2 + p.b;
  out.g = s2 - out.r - out.b;
  return out;
}

Rgb modify_colour(const Rgb& pixel, const MatchCoefficients& c) noexcept {
  if (pixel.sum() == 0.0) return pixel;
  return modify_chromaticity(modify_intensity(pixel, c.alpha_i, c.beta_i), c.alpha_r, c.beta_r,
                             c.alpha_b, c.beta_b);
}

ImageBuffer apply_colour_modification(const ImageBuffer& image, const MatchCoefficients& coeffs,
                                      std::size_t workers) {
  return map_pixels(image, workers,
                    [&](const Rgb& p) { return clamp01(modify_colour(p, coeffs)); });
}

MatchResult match_images(const ImageBuffer& source, const ImageBuffer& target,
                         std::span<const PatchAnnotation> source_annotations,
                         std::span<const PatchAnnotation> target_annotations,
                         const PatchOptions& options, std::size_t workers) {
  if (source_annotations.size() != target_annotations.size()) {
    throw Error(ErrorKind::configuration,
                "source has " + std::to_string(source_annotations.size()) +
                    " annotations, target has " + std::to_string(target_annotations.size()));
  }
  validate_annotations(source, source_annotations);
  validate_annotations(target, target_annotations);

  std::map<int, const PatchAnnotation*> by_id;
  for (const auto& a : target_annotations) by_id[a.patch_id] = &a;
  std::vector<ColorPatchSample> src;
  std::vector<ColorPatchSample> dst;
  for (const auto& a : source_annotations) {
    const auto it = by_id.find(a.patch_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::configuration,
                  "patch " + std::to_string(a.patch_id) + " has no counterpart in the target");
    }
    src.push_back(extract_patch(source, a, options));
    dst.push_back(extract_patch(target, *it->second, options));
  }
  MatchResult result;
  result.coeffs = fit_linear_match(src, dst);
  result.image = apply_colour_modification(source, result.coeffs, workers);
  return result;
}

std::string coefficients_to_json(const MatchCoefficients& c) {
  nlohmann::json j = {{"alpha_i", c.alpha_i}, {"beta_i", c.beta_i}, {"alpha_r", c.alpha_r},
                      {"beta_r", c.beta_r},   {"alpha_b", c.alpha_b}, {"beta_b", c.beta_b}};
  return j.dump(2);
}

}  // namespace rcc
