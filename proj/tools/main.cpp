// rccalign: calibrate, linearise, match, evaluate and synthesise.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
// failure inside an otherwise valid run.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rcc/error.hpp"
#include "rcc/parallel.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace rcc::cli;

  CLI::App app{"Relative colour alignment across cameras"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.set_version_flag("--version", "rccalign 0.1.0");

  Common common;
  common.workers = rcc::default_workers();
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "Root seed, recorded in every output")->capture_default_str();

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate the inverse response from calibration images");
  calibrate->add_option("--images", cal.images, "Calibration images")->required();
  calibrate->add_option("--annotations", cal.annotations, "Patch annotation JSON")->required();
  calibrate->add_option("--method", cal.method, "select | optimise")
      ->check(CLI::IsMember({"select", "optimise"}))
      ->capture_default_str();
  calibrate->add_option("--dorf", cal.dorf, "DoRF-layout curve file (default: built-in surrogate)");
  calibrate->add_option("--emor", cal.emor, "Inverse EMoR basis file (optimise only)");
  calibrate->add_option("--lambda1", cal.lambda1, "BoLD normalisation weight");
  calibrate->add_option("--lambda2", cal.lambda2, "BoLD area weight");
  calibrate->add_option("--restarts", cal.restarts, "Optimisation restarts")->capture_default_str();
  calibrate->add_option("--epochs", cal.epochs, "Maximum epochs per restart")->capture_default_str();
  calibrate->add_option("--k", cal.k, "Basis size")->check(CLI::Range(1, 11))->capture_default_str();

  LineariseArgs lin;
  auto* linearise = app.add_subcommand("linearise", "Map images through a calibrated inverse response");
  linearise->add_option("--icrf", lin.icrf, "Curve JSON from calibrate")->required();
  linearise->add_option("--images", lin.images, "Images to linearise")->required();
  linearise->add_option("--mode", lin.mode, "per-channel | per-intensity")
      ->check(CLI::IsMember({"per-channel", "per-intensity"}))
      ->capture_default_str();

  MatchArgs match;
  auto* matcher = app.add_subcommand("match", "Match a source image's colours to a target image");
  matcher->add_option("--source", match.source, "Source image")->required();
  matcher->add_option("--target", match.target, "Target image")->required();
  matcher->add_option("--source-annotations", match.source_annotations, "Source patch annotations")
      ->required();
  matcher->add_option("--target-annotations", match.target_annotations,
                      "Target patch annotations (default: source file)");

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Handshake evaluation over a dataset manifest");
  evaluate->add_option("--manifest", eval.manifest, "Dataset manifest JSON")->required();
  evaluate->add_option("--metric", eval.metric, "rmse | rae | de2000")
      ->check(CLI::IsMember({"rmse", "rae", "de2000"}))
      ->capture_default_str();
  evaluate->add_flag("--align", eval.align, "Linearise and 2-CCP match before measuring");
  evaluate->add_option("--match-patches", eval.match_patches, "Patch ids used for matching")
      ->capture_default_str();

  SynthArgs synth;
  auto* synthesise = app.add_subcommand("synth", "Write a synthetic dataset with known ground truth");
  synthesise->add_option("--cameras", synth.cameras, "Camera count")->capture_default_str();
  synthesise->add_option("--images", synth.images, "Images per camera")->capture_default_str();
  synthesise->add_option("--patches", synth.patches, "Patches per image")->capture_default_str();
  synthesise->add_option("--sigma", synth.sigma, "Linear-domain noise")->capture_default_str();
  synthesise->add_option("--tint", synth.tint, "Per-channel spread of gains")->capture_default_str();
  synthesise->add_option("--offset", synth.offset, "Maximum per-image additive light")
      ->capture_default_str();
  synthesise->add_flag("--colourful", synth.colourful, "ColorChecker reflectances");
  synthesise->add_option("--curves", synth.curves, "Database curve index per camera");
  synthesise->add_option("--dorf", synth.dorf, "DoRF-layout curve file (default: built-in surrogate)");
  synthesise->add_option("--bit-depth", synth.bit_depth, "PNG bit depth")
      ->check(CLI::IsMember({8, 16}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*calibrate) cmd_calibrate(common, cal);
    else if (*linearise) cmd_linearise(common, lin);
    else if (*matcher) cmd_match(common, match);
    else if (*evaluate) cmd_evaluate(common, eval);
    else if (*synthesise) cmd_synth(common, synth);
  } catch (const rcc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rcc::is_validation_error(e.kind()) ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
