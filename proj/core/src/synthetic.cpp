#include "rcc/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "rcc/calibration.hpp"
#include "rcc/error.hpp"
#include "rcc/parallel.hpp"

namespace rcc {

namespace {

double srgb_decode(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

const std::array<Rgb, 24>& colorchecker_reflectances() {
  static const std::array<Rgb, 24> table = [] {
    constexpr int srgb[24][3] = {
        {115, 82, 68},   {194, 150, 130}, {98, 122, 157},  {87, 108, 67},   {133, 128, 177},
        {103, 189, 170}, {214, 126, 44},  {80, 91, 166},   {193, 90, 99},   {94, 60, 108},
        {157, 188, 64},  {224, 163, 46},  {56, 61, 150},   {70, 148, 73},   {175, 54, 60},
        {231, 199, 31},  {187, 86, 149},  {8, 133, 161},   {243, 243, 242}, {200, 200, 200},
        {160, 160, 160}, {122, 122, 121}, {85, 85, 85},    {52, 52, 52}};
    std::array<Rgb, 24> out{};
    for (std::size_t i = 0; i < 24; ++i) {
      out[i] = {srgb_decode(srgb[i][0] / 255.0), srgb_decode(srgb[i][1] / 255.0),
                srgb_decode(srgb[i][2] / 255.0)};
    }
    return out;
  }();
  return table;
}

void SyntheticSceneSpec::validate() const {
  if (gains.empty()) throw Error(ErrorKind::configuration, "scene needs at least one image");
  if (reflectances.empty()) throw Error(ErrorKind::configuration, "scene needs at least one patch");
  for (const Rgb& g : gains) {
    if (!(g.r > 0.0 && g.g > 0.0 && g.b > 0.0) || !std::isfinite(g.sum())) {
      throw Error(ErrorKind::configuration, "illumination gains must be positive");
    }
  }
  for (const Rgb& r : reflectances) {
    for (int c = 0; c < 3; ++c) {
      if (!(r[c] >= 0.0 && r[c] <= 1.0)) {
        throw Error(ErrorKind::configuration, "reflectances must lie in [0,1]");
      }
    }
  }
  if (!offsets.empty() && offsets.size() != gains.size()) {
    throw Error(ErrorKind::configuration, "offsets must be empty or one per image");
  }
  if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::configuration, "noise sigma must be >= 0");
  if (patch_size == 0 || grid_columns == 0) {
    throw Error(ErrorKind::configuration, "patch size and grid columns must be positive");
  }
}

std::vector<PatchAnnotation> grid_annotations(std::size_t patches, std::size_t patch_size,
                                              std::size_t gap, std::size_t columns,
                                              const std::string& image_id) {
  std::vector<PatchAnnotation> out;
  out.reserve(patches);
  for (std::size_t j = 0; j < patches; ++j) {
    const std::size_t col = j % columns;
    const std::size_t row = j / columns;
    out.push_back({image_id, static_cast<int>(j),
                   {gap + col * (patch_size + gap), gap + row * (patch_size + gap), patch_size,
                    patch_size}});
  }
  return out;
}

SyntheticScene generate_scene(const SyntheticSceneSpec& spec) {
  spec.validate();
  const std::size_t m = spec.images();
  const std::size_t n = spec.patches();
  const std::size_t columns = std::min(spec.grid_columns, n);
  const std::size_t grid_rows = (n + columns - 1) / columns;
  const std::size_t width = spec.gap + columns * (spec.patch_size + spec.gap);
  const std::size_t height = spec.gap + grid_rows * (spec.patch_size + spec.gap);

  std::mt19937_64 rng = seeded(spec.seed, 0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::span<const double> f = spec.crf.samples();

  SyntheticScene scene;
  scene.crf = spec.crf;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string id = "img" + std::to_string(i);
    auto annotations = grid_annotations(n, spec.patch_size, spec.gap, columns, id);
    ImageBuffer image(width, height);
    std::vector<Rgb> linear(n);
    std::vector<Rgb> observed(n);
    const double offset = spec.offsets.empty() ? 0.0 : spec.offsets[i];
    for (std::size_t j = 0; j < n; ++j) {
      Rgb lin;
      Rgb obs;
      for (int c = 0; c < 3; ++c) {
        lin[c] = std::clamp(spec.gains[i][c] * spec.reflectances[j][c] + offset, 0.0, 1.0);
        const double e = spec.noise_sigma > 0.0 ? spec.noise_sigma * noise(rng) : 0.0;
        obs[c] = interpolate_samples(f, std::clamp(lin[c] + e, 0.0, 1.0));
      }
      linear[j] = lin;
      observed[j] = obs;
      const Rect& r = annotations[j].region;
      for (std::size_t y = r.y; y < r.y + r.h; ++y) {
        for (std::size_t x = r.x; x < r.x + r.w; ++x) image.set(x, y, obs);
      }
    }
    scene.images.push_back(std::move(image));
    scene.annotations.push_back(std::move(annotations));
    scene.linear.push_back(std::move(linear));
    scene.observed.push_back(std::move(observed));
  }
  return scene;
}

SyntheticSceneSpec random_scene_spec(const RandomSceneOptions& o, const ResponseCurve& crf,
                                     std::uint64_t seed) {
  if (o.images == 0 || o.patches == 0) {
    throw Error(ErrorKind::configuration, "scene needs images and patches");
  }
  if (o.colourful && o.patches > 24) {
    throw Error(ErrorKind::configuration, "the ColorChecker has only 24 patches");
  }
  std::mt19937_64 rng = seeded(seed, 1);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  SyntheticSceneSpec spec;
  spec.crf = crf;
  spec.noise_sigma = o.noise_sigma;
  spec.seed = seed;
  spec.reflectances.resize(o.patches);
  if (o.colourful) {
    const auto& cc = colorchecker_reflectances();
    std::copy_n(cc.begin(), o.patches, spec.reflectances.begin());
  } else {
    for (Rgb& r : spec.reflectances) {
      const double base = uniform(0.05, 0.95);
      for (int c = 0; c < 3; ++c) r[c] = base * uniform(1.0 - o.tint, 1.0);
    }
  }
  spec.gains.resize(o.images);
  for (Rgb& g : spec.gains) {
    const double exposure = uniform(o.gain_min, o.gain_max);
    for (int c = 0; c < 3; ++c) {
      g[c] = std::clamp(exposure * uniform(1.0 - o.tint, 1.0), o.gain_min, o.gain_max);
    }
  }
  if (o.offset_max > 0.0) {
    spec.offsets.resize(o.images);
    for (double& v : spec.offsets) v = uniform(0.0, o.offset_max);
  }
  return spec;
}

CcpMatrix scene_intensity(const SyntheticScene& scene) {
  std::vector<std::vector<ColorPatchSample>> samples;
  samples.reserve(scene.observed.size());
  for (const auto& image : scene.observed) {
    std::vector<ColorPatchSample> row;
    row.reserve(image.size());
    for (const Rgb& p : image) row.push_back(ColorPatchSample::from_rgb(p));
    samples.push_back(std::move(row));
  }
  return intensity_matrix(samples);
}

RecoveryStudy recovery_study(const DorfDatabase& dorf, std::size_t trials,
                             const RandomSceneOptions& options, const BoldParams& params,
                             std::uint64_t seed, double tolerance, std::size_t workers) {
  if (dorf.empty()) throw Error(ErrorKind::configuration, "DoRF database is empty");
  RecoveryStudy study;
  study.tolerance = tolerance;
  study.trials.resize(trials);

  parallel_for(trials, workers, [&](std::size_t t) {
    std::mt19937_64 rng = seeded(seed, 1000 + t);
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, dorf.size() - 1)(rng);
    const SyntheticScene scene =
        generate_scene(random_scene_spec(options, dorf.curve(j), seed + 7919 * (t + 1)));

    const auto start = std::chrono::steady_clock::now();
    const CalibrationResult result = select_icrf(scene_intensity(scene), dorf, params, 1);
    const auto stop = std::chrono::steady_clock::now();

    RecoveryTrial& trial = study.trials[t];
    trial.trial = t;
    trial.true_index = j;
    trial.selected_index = result.index;
    trial.deviation = mean_absolute_deviation(result.icrf, dorf.inverse(j));
    trial.seconds = std::chrono::duration<double>(stop - start).count();
    trial.degenerate = result.diagnostics.mu < 1e-12;
  });

  std::size_t ok = 0;
  for (const RecoveryTrial& t : study.trials) {
    ok += t.deviation <= tolerance;
    study.max_seconds = std::max(study.max_seconds, t.seconds);
    study.degenerate_count += t.degenerate;
  }
  study.success_fraction = trials == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(trials);
  return study;
}

}  // namespace rcc
