#include <benchmark/benchmark.h>

#include <random>

#include "rcc/alignment.hpp"
#include "rcc/calibration.hpp"
#include "rcc/metrics.hpp"
#include "rcc/surrogate.hpp"
#include "rcc/synthetic.hpp"

using namespace rcc;

namespace {

const DorfDatabase& database() {
  static const DorfDatabase db = [] {
    DorfDatabase d = surrogate_dorf();
    for (std::size_t i = 0; i < d.size(); ++i) (void)d.inverse(i);
    return d;
  }();
  return db;
}

CcpMatrix scene(std::size_t images, std::size_t patches) {
  RandomSceneOptions o;
  o.images = images;
  o.patches = patches;
  return scene_intensity(generate_scene(random_scene_spec(o, database().curve(42), 1)));
}

}  // namespace

static void BM_EvaluateCandidate(benchmark::State& state) {
  const CcpMatrix w = scene(static_cast<std::size_t>(state.range(0)), 24);
  const ResponseCurve& icrf = database().inverse(42);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_candidate(w, icrf, {}));
}
BENCHMARK(BM_EvaluateCandidate)->Arg(4)->Arg(8)->Arg(32);

static void BM_SelectIcrf(benchmark::State& state) {
  const CcpMatrix w = scene(8, 24);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(select_icrf(w, database(), {}, workers));
}
BENCHMARK(BM_SelectIcrf)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_OptimisationCost(benchmark::State& state) {
  const CcpMatrix w = scene(8, 24);
  const EmorBasis basis = pca_basis(database(), EmorKind::inverse, 5);
  const EmorCoefficients theta{std::vector<double>(5, 0.1)};
  const BoldParams bold = default_bold_params(CalibrationMethod::optimisation);
  for (auto _ : state) benchmark::DoNotOptimize(optimisation_cost(theta, basis, w, bold, OptimParams{}));
}
BENCHMARK(BM_OptimisationCost);

static void BM_ApplyColourModification(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Rgb> px(side * side);
  for (Rgb& p : px) p = {u(rng), u(rng), u(rng)};
  const ImageBuffer img(side, side, std::move(px));
  const MatchCoefficients c{1.2, 0.05, 0.9, 0.02, 1.1, -0.01};
  for (auto _ : state) benchmark::DoNotOptimize(apply_colour_modification(img, c, 4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_ApplyColourModification)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_DeltaE2000(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Rgb> a(1024), b(1024);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = {u(rng), u(rng), u(rng)};
    b[i] = {u(rng), u(rng), u(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(delta_e2000(a, b));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_DeltaE2000);

static void BM_Handshake(benchmark::State& state) {
  std::vector<std::vector<std::vector<Rgb>>> groups(3);
  for (std::size_t c = 0; c < 3; ++c) {
    RandomSceneOptions o;
    o.images = 6;
    o.colourful = true;
    groups[c] = generate_scene(random_scene_spec(o, database().curve(10 + c), c)).observed;
  }
  for (auto _ : state) benchmark::DoNotOptimize(handshake_evaluate(groups, Metric::de2000, {}, 1));
}
BENCHMARK(BM_Handshake);

BENCHMARK_MAIN();
