#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rcc/color.hpp"
#include "rcc/curve.hpp"
#include "rcc/image.hpp"

namespace rcc {

enum class LinearisationMode {
  per_channel,    ///< every channel mapped through the curve
  per_intensity,  ///< intensity mapped, chromaticity kept
};

/// Maps pixels through the inverse response. Output is clamped to [0,1].
ImageBuffer linearise_image(const ImageBuffer& image, const ResponseCurve& icrf,
                            LinearisationMode mode = LinearisationMode::per_channel,
                            std::size_t workers = 1);
Rgb linearise_rgb(const Rgb& rgb, const ResponseCurve& icrf,
                  LinearisationMode mode = LinearisationMode::per_channel);

struct MatchCoefficients {
  double alpha_i = 1.0;
  double beta_i = 0.0;
  double alpha_r = 1.0;
  double beta_r = 0.0;
  double alpha_b = 1.0;
  double beta_b = 0.0;

  /// Whether the intensity fit preserves ordering (alpha_i > 0).
  bool orientation_preserving() const noexcept { return alpha_i > 0.0; }

  friend bool operator==(const MatchCoefficients&, const MatchCoefficients&) = default;
};

struct LineFit {
  double alpha = 1.0;
  double beta = 0.0;
};

/// Ordinary least squares y = alpha x + beta. Throws insufficient_data for
/// fewer than 2 points and degenerate_regression when x has no variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Intensity is fitted on the raw sum R+G+B; chromaticities on r = R/I and
/// b = B/I (black samples use the achromatic point).
MatchCoefficients fit_linear_match(std::span<const ColorPatchSample> source,
                                   std::span<const ColorPatchSample> target);

/// Intensity stage only (no clamping). Zero-sum pixels pass through.
Rgb modify_intensity(const Rgb& pixel, double alpha_i, double beta_i) noexcept;
/// Chromaticity stage only (no clamping).
Rgb modify_chromaticity(const Rgb& pixel, double alpha_r, double beta_r, double alpha_b,
                        double beta_b) noexcept;
/// Both stages, unclamped.
Rgb modify_colour(const Rgb& pixel, const MatchCoefficients& coeffs) noexcept;

/// Both stages per pixel, clamped to [0,1] once at the end.
ImageBuffer apply_colour_modification(const ImageBuffer& image, const MatchCoefficients& coeffs,
                                      std::size_t workers = 1);

struct MatchResult {
  ImageBuffer image;
  MatchCoefficients coeffs;
};

/// Pairs patches by patch_id, fits source -> target and applies the fit to
/// the source image. Throws configuration error when the ids do not pair up.
MatchResult match_images(const ImageBuffer& source, const ImageBuffer& target,
                         std::span<const PatchAnnotation> source_annotations,
                         std::span<const PatchAnnotation> target_annotations,
                         const PatchOptions& options = {}, std::size_t workers = 1);

std::string coefficients_to_json(const MatchCoefficients& coeffs);

}  // namespace rcc
