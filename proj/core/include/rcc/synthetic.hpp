#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcc/bold.hpp"
#include "rcc/ccp.hpp"
#include "rcc/color.hpp"
#include "rcc/curve.hpp"
#include "rcc/image.hpp"
#include "rcc/ingest.hpp"

namespace rcc {

/// Linear-light reflectances of the 24-patch ColorChecker (decoded from
/// the usual sRGB reference values).
const std::array<Rgb, 24>& colorchecker_reflectances();

struct SyntheticSceneSpec {
  std::vector<Rgb> gains;           ///< one per image
  std::vector<double> offsets;      ///< optional per-image additive light; empty means 0
  std::vector<Rgb> reflectances;    ///< one per patch
  ResponseCurve crf = ResponseCurve::identity();
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t patch_size = 8;       ///< pixels per patch side
  std::size_t gap = 2;              ///< pixels between patches and at the border
  std::size_t grid_columns = 6;

  std::size_t images() const noexcept { return gains.size(); }
  std::size_t patches() const noexcept { return reflectances.size(); }
  void validate() const;
};

struct SyntheticScene {
  std::vector<ImageBuffer> images;
  std::vector<std::vector<PatchAnnotation>> annotations;
  /// Pre-noise linear values gain * reflectance (+ offset), clipped; [image][patch].
  std::vector<std::vector<Rgb>> linear;
  /// Rendered (post-noise, post-response) patch values; [image][patch].
  std::vector<std::vector<Rgb>> observed;
  ResponseCurve crf = ResponseCurve::identity();
};

/// Renders every patch as a uniform rectangle on a fixed grid. Noise is one
/// Gaussian draw per patch and channel in the linear domain.
SyntheticScene generate_scene(const SyntheticSceneSpec& spec);

/// Patch rectangles used by generate_scene for a given layout.
std::vector<PatchAnnotation> grid_annotations(std::size_t patches, std::size_t patch_size,
                                              std::size_t gap, std::size_t columns,
                                              const std::string& image_id);

struct RandomSceneOptions {
  std::size_t images = 8;
  std::size_t patches = 24;
  double gain_min = 0.3;
  double gain_max = 1.0;
  /// Relative per-channel spread of gains and reflectances around grey.
  double tint = 0.05;
  /// Upper bound of the per-image additive offset; 0 disables it.
  double offset_max = 0.0;
  double noise_sigma = 0.005;
  /// Use ColorChecker reflectances instead of near-grey random ones.
  bool colourful = false;
};

/// Draws gains (overall exposure times a small per-channel tint, clamped to
/// [gain_min, gain_max]) and reflectances from a seeded generator.
SyntheticSceneSpec random_scene_spec(const RandomSceneOptions& options, const ResponseCurve& crf,
                                     std::uint64_t seed);

/// Mean-intensity CCP matrix of a scene's observed patch values.
CcpMatrix scene_intensity(const SyntheticScene& scene);

struct RecoveryTrial {
  std::size_t trial = 0;
  std::size_t true_index = 0;
  std::size_t selected_index = 0;
  double deviation = 0.0;   ///< mean |recovered - true inverse|
  double seconds = 0.0;
  bool degenerate = false;  ///< the winning BoLD value had no spread to measure
};

struct RecoveryStudy {
  std::vector<RecoveryTrial> trials;
  double tolerance = 0.02;
  double success_fraction = 0.0;
  double max_seconds = 0.0;
  std::size_t degenerate_count = 0;
};

/// Each trial draws a database curve and a scene from (seed, trial), runs
/// selection and records the deviation from the true inverse.
RecoveryStudy recovery_study(const DorfDatabase& dorf, std::size_t trials,
                             const RandomSceneOptions& options, const BoldParams& params,
                             std::uint64_t seed, double tolerance = 0.02, std::size_t workers = 0);

}  // namespace rcc
