#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcc/color.hpp"
#include "rcc/image.hpp"

namespace rcc {

/// RMSE of Euclidean RGB distance over patches, on the 0-255 scale.
double rmse(std::span<const Rgb> a, std::span<const Rgb> b);

/// Angle between two RGB vectors in degrees. Throws zero_vector.
double rae(const Rgb& a, const Rgb& b);
/// Mean angle over a sequence.
double rae(std::span<const Rgb> a, std::span<const Rgb> b);

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// sRGB (D65, 2 degree observer) to CIELAB.
Lab srgb_to_lab(const Rgb& rgb) noexcept;
double delta_e2000(const Lab& x, const Lab& y) noexcept;
double delta_e2000(const Rgb& x, const Rgb& y) noexcept;
/// Mean colour difference over a sequence.
double delta_e2000(std::span<const Rgb> a, std::span<const Rgb> b);

/// max(b/r, r/b) of a patch's chromaticity. Throws undefined_ratio when
/// either chromaticity is zero.
double br_ratio(const ColorPatchSample& sample);

enum class Metric { rmse, rae, de2000 };
std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

/// Per-comparison value: RMSE over patches, or mean RAE / mean colour
/// difference.
double measure(Metric metric, std::span<const Rgb> a, std::span<const Rgb> b);

struct HandshakeItem {
  std::size_t camera = 0;
  std::size_t image = 0;
  std::vector<Rgb> ccps;
};

/// Produces the (aligned source, reference) CCP pair that gets measured.
/// The default compares the raw CCPs.
using HandshakePipeline = std::function<std::pair<std::vector<Rgb>, std::vector<Rgb>>(
    const HandshakeItem& source, const HandshakeItem& target)>;

struct HandshakeComparison {
  std::size_t source_camera = 0;
  std::size_t source_image = 0;
  std::size_t target_camera = 0;
  std::size_t target_image = 0;
  double value = 0.0;
};

struct HandshakeReport {
  Metric metric = Metric::rmse;
  std::size_t cameras = 0;
  /// cameras x cameras medians; row = source camera, column = target camera.
  std::vector<std::vector<double>> pairwise;
  /// Comparisons feeding the pooled vector, in enumeration order.
  std::vector<HandshakeComparison> comparisons;
  std::vector<double> pooled;
  double median = 0.0;
  std::size_t count = 0;
};

/// Closed-form comparison counts.
std::size_t handshake_single_count(std::size_t n) noexcept;
std::size_t handshake_cross_count(std::size_t m, std::size_t c) noexcept;

/// Middle order statistic; the mean of the two middle values for even sizes.
double median_of(std::vector<double> values);

/// groups[c][i] holds the CCPs of image i of camera c. With one camera the
/// pooled vector is every unordered image pair (i<j, source i to target j).
/// With several cameras it is every camera pair A<B and image pair i<j
/// with source image i of A and target image j of B. The heatmap also
/// holds the reverse (B to A) direction and the within-camera diagonal.
HandshakeReport handshake_evaluate(const std::vector<std::vector<std::vector<Rgb>>>& groups,
                                   Metric metric, const HandshakePipeline& pipeline = {},
                                   std::size_t workers = 0);

void write_pairwise_csv(std::ostream& out, const HandshakeReport& report);
void write_comparisons_csv(std::ostream& out, const HandshakeReport& report);
std::string report_to_json(const HandshakeReport& report, std::uint64_t seed = 0);

/// Scales channels so their means equal the mean intensity.
ImageBuffer wb_grey_world(const ImageBuffer& image);
/// Scales channels so their maxima map to 1.
ImageBuffer wb_white_patch(const ImageBuffer& image);

}  // namespace rcc
