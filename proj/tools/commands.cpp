#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rcc/alignment.hpp"
#include "rcc/calibration.hpp"
#include "rcc/error.hpp"
#include "rcc/image_io.hpp"
#include "rcc/ingest.hpp"
#include "rcc/metrics.hpp"
#include "rcc/surrogate.hpp"
#include "rcc/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rcc::cli {

namespace {

using AnnotationMap = std::map<std::string, std::vector<PatchAnnotation>>;

AnnotationMap load_annotations(const std::string& path) {
  AnnotationMap out;
  for (auto& a : annotations_from_json(read_text_file(path))) out[a.image_id].push_back(a);
  for (auto& [id, list] : out) {
    std::sort(list.begin(), list.end(),
              [](const PatchAnnotation& a, const PatchAnnotation& b) { return a.patch_id < b.patch_id; });
  }
  return out;
}

// Annotations are keyed by image file stem; entries without an image id
// apply to every image.
const std::vector<PatchAnnotation>& annotations_for(const AnnotationMap& map,
                                                    const std::string& image_path) {
  const std::string stem = fs::path(image_path).stem().string();
  if (auto it = map.find(stem); it != map.end()) return it->second;
  if (auto it = map.find(""); it != map.end()) return it->second;
  throw Error(ErrorKind::configuration, "no annotations for image '" + stem + "'");
}

std::vector<ColorPatchSample> load_patches(const std::string& image_path,
                                           const std::vector<PatchAnnotation>& annotations) {
  const ImageBuffer image = read_image(image_path);
  validate_annotations(image, annotations);
  return extract_patches(image, annotations);
}

std::vector<int> patch_ids(const std::vector<PatchAnnotation>& annotations) {
  std::vector<int> ids;
  for (const auto& a : annotations) ids.push_back(a.patch_id);
  return ids;
}

void require_existing(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorKind::configuration, std::string("missing ") + what + " path");
  if (!fs::exists(path)) throw Error(ErrorKind::io, std::string(what) + " '" + path + "' does not exist");
}

fs::path prepare_out(const Common& common) {
  fs::path out(common.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + common.out + "'");
  return out;
}

DorfDatabase load_reference(const std::string& path) {
  if (path.empty()) return surrogate_dorf();
  require_existing(path, "DoRF file");
  DorfDatabase db = load_dorf(path);
  for (const auto& w : db.warnings()) std::cerr << "warning: " << w << '\n';
  return db;
}

std::map<std::string, std::string> png_text(const Common& common) {
  return {{"seed", std::to_string(common.seed)}, {"Software", "rccalign"}};
}

}  // namespace

void cmd_calibrate(const Common& common, const CalibrateArgs& args) {
  if (args.images.size() < 2) {
    throw Error(ErrorKind::insufficient_images,
                "calibration needs at least 2 images, got " + std::to_string(args.images.size()));
  }
  require_existing(args.annotations, "annotation file");
  for (const auto& p : args.images) require_existing(p, "image");
  const CalibrationMethod method = parse_method(args.method);

  const AnnotationMap annotations = load_annotations(args.annotations);
  std::vector<std::vector<ColorPatchSample>> samples;
  std::vector<int> ids;
  for (const auto& path : args.images) {
    const auto& anns = annotations_for(annotations, path);
    if (samples.empty()) {
      ids = patch_ids(anns);
    } else if (patch_ids(anns) != ids) {
      throw Error(ErrorKind::configuration, "image '" + path + "' has a different patch set");
    }
    samples.push_back(load_patches(path, anns));
  }
  const CcpMatrix intensity = intensity_matrix(samples);

  BoldParams bold = default_bold_params(method);
  if (args.lambda1 >= 0.0) bold.lambda1 = args.lambda1;
  if (args.lambda2 >= 0.0) bold.lambda2 = args.lambda2;

  const DorfDatabase dorf = load_reference(args.dorf);
  CalibrationResult result;
  if (method == CalibrationMethod::selection) {
    result = select_icrf(intensity, dorf, bold, common.workers);
  } else {
    EmorBasis basis;
    if (args.emor.empty()) {
      basis = pca_basis(dorf, EmorKind::inverse, 11);
    } else {
      require_existing(args.emor, "EMoR file");
      basis = with_database_scales(load_emor(args.emor, EmorKind::inverse), dorf);
    }
    OptimParams opt;
    opt.seed = common.seed;
    opt.restarts = args.restarts;
    opt.max_epochs = args.epochs;
    opt.k = args.k;
    result = optimise_icrf(intensity, basis, bold, opt, common.workers);
  }
  result.seed = common.seed;

  const fs::path out = prepare_out(common);
  json j = json::parse(calibration_to_json(result));
  j["reference"] = args.dorf.empty() ? "surrogate" : args.dorf;
  j["images"] = args.images.size();
  j["patches"] = ids.size();
  write_text_file((out / "icrf.json").string(), j.dump(2));

  std::ostringstream csv;
  csv << "# seed=" << common.seed << '\n';
  write_distance_csv(csv, result.diagnostics);
  write_text_file((out / "bold.csv").string(), csv.str());

  std::cout << "calibrated (" << to_string(method) << "): " << result.icrf.name()
            << " score=" << result.score << " -> " << (out / "icrf.json").string() << '\n';
}

void cmd_linearise(const Common& common, const LineariseArgs& args) {
  require_existing(args.icrf, "curve file");
  if (args.images.empty()) throw Error(ErrorKind::configuration, "no images to linearise");
  LinearisationMode mode;
  if (args.mode == "per-channel") mode = LinearisationMode::per_channel;
  else if (args.mode == "per-intensity") mode = LinearisationMode::per_intensity;
  else throw Error(ErrorKind::configuration, "unknown linearisation mode '" + args.mode + "'");

  const ResponseCurve icrf = icrf_from_json(read_text_file(args.icrf));
  const fs::path out = prepare_out(common);
  auto text = png_text(common);
  text["icrf"] = icrf.name();
  for (const auto& path : args.images) {
    require_existing(path, "image");
    const ImageBuffer linear = linearise_image(read_image(path), icrf, mode, common.workers);
    const fs::path dest = out / (fs::path(path).stem().string() + "_linear.png");
    write_png(dest.string(), linear, text, 16);
    std::cout << path << " -> " << dest.string() << '\n';
  }
}

void cmd_match(const Common& common, const MatchArgs& args) {
  require_existing(args.source, "source image");
  require_existing(args.target, "target image");
  require_existing(args.source_annotations, "source annotation file");
  const std::string target_ann =
      args.target_annotations.empty() ? args.source_annotations : args.target_annotations;
  require_existing(target_ann, "target annotation file");

  const auto src_map = load_annotations(args.source_annotations);
  const auto& src_anns = annotations_for(src_map, args.source);
  const auto tgt_map = load_annotations(target_ann);
  const auto& tgt_anns = annotations_for(tgt_map, args.target);
  const MatchResult result = match_images(read_image(args.source), read_image(args.target),
                                          src_anns, tgt_anns, {}, common.workers);
  if (!result.coeffs.orientation_preserving()) {
    std::cerr << "warning: intensity fit reverses ordering (alpha_i <= 0)\n";
  }

  const fs::path out = prepare_out(common);
  write_png((out / "matched.png").string(), result.image, png_text(common));
  json j = json::parse(coefficients_to_json(result.coeffs));
  j["seed"] = common.seed;
  j["patches"] = src_anns.size();
  write_text_file((out / "coefficients.json").string(), j.dump(2));
  std::cout << "matched " << args.source << " to " << args.target << " using " << src_anns.size()
            << " patches\n";
}

void cmd_evaluate(const Common& common, const EvaluateArgs& args) {
  require_existing(args.manifest, "manifest");
  const Metric metric = parse_metric(args.metric);
  const fs::path base = fs::path(args.manifest).parent_path();
  json manifest;
  try {
    manifest = json::parse(read_text_file(args.manifest));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("bad manifest: ") + e.what());
  }
  if (!manifest.contains("cameras") || !manifest["cameras"].is_array()) {
    throw Error(ErrorKind::parse, "manifest has no \"cameras\" array");
  }
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return (path.is_absolute() ? path : base / path).string();
  };
  const std::string ann_path = resolve(manifest.value("annotations", std::string("annotations.json")));
  require_existing(ann_path, "annotation file");
  const AnnotationMap annotations = load_annotations(ann_path);

  std::vector<std::vector<std::vector<Rgb>>> groups;
  std::vector<ResponseCurve> icrf;
  std::vector<int> ids;
  for (const auto& cam : manifest["cameras"]) {
    std::vector<std::vector<Rgb>> images;
    for (const auto& img : cam.at("images")) {
      const std::string path = resolve(img.get<std::string>());
      require_existing(path, "image");
      const auto& anns = annotations_for(annotations, path);
      if (ids.empty()) ids = patch_ids(anns);
      else if (patch_ids(anns) != ids) {
        throw Error(ErrorKind::configuration, "image '" + path + "' has a different patch set");
      }
      std::vector<Rgb> ccps;
      for (const auto& s : load_patches(path, anns)) ccps.push_back(s.rgb);
      images.push_back(std::move(ccps));
    }
    groups.push_back(std::move(images));
    if (cam.contains("icrf")) {
      const std::string path = resolve(cam["icrf"].get<std::string>());
      require_existing(path, "curve file");
      icrf.push_back(icrf_from_json(read_text_file(path)));
    } else {
      icrf.push_back(ResponseCurve::identity());
    }
  }

  HandshakePipeline pipeline;
  if (args.align) {
    if (args.match_patches.size() < 2) {
      throw Error(ErrorKind::configuration, "alignment needs at least 2 matching patches");
    }
    std::vector<std::size_t> columns;
    for (int id : args.match_patches) {
      const auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) {
        throw Error(ErrorKind::configuration, "matching patch " + std::to_string(id) + " is not annotated");
      }
      columns.push_back(static_cast<std::size_t>(it - ids.begin()));
    }
    std::vector<ResponseCurve> forward;
    for (const auto& c : icrf) forward.push_back(invert_curve(c));
    pipeline = [icrf, forward, columns](const HandshakeItem& s, const HandshakeItem& t) {
      std::vector<Rgb> ls;
      std::vector<Rgb> lt;
      for (const Rgb& v : s.ccps) ls.push_back(linearise_rgb(v, icrf[s.camera]));
      for (const Rgb& v : t.ccps) lt.push_back(linearise_rgb(v, icrf[t.camera]));
      std::vector<ColorPatchSample> cs;
      std::vector<ColorPatchSample> ct;
      for (std::size_t k : columns) {
        cs.push_back(ColorPatchSample::from_rgb(ls[k]));
        ct.push_back(ColorPatchSample::from_rgb(lt[k]));
      }
      const MatchCoefficients m = fit_linear_match(cs, ct);
      std::vector<Rgb> aligned;
      for (const Rgb& v : ls) aligned.push_back(linearise_rgb(clamp01(modify_colour(v, m)), forward[t.camera]));
      return std::make_pair(aligned, t.ccps);
    };
  }

  const HandshakeReport report = handshake_evaluate(groups, metric, pipeline, common.workers);
  const fs::path out = prepare_out(common);
  std::ostringstream pairwise;
  pairwise << "# seed=" << common.seed << '\n';
  write_pairwise_csv(pairwise, report);
  write_text_file((out / "pairwise.csv").string(), pairwise.str());
  std::ostringstream comparisons;
  comparisons << "# seed=" << common.seed << '\n';
  write_comparisons_csv(comparisons, report);
  write_text_file((out / "comparisons.csv").string(), comparisons.str());
  json summary = json::parse(report_to_json(report, common.seed));
  summary["aligned"] = args.align;
  write_text_file((out / "summary.json").string(), summary.dump(2));
  std::cout << to_string(metric) << " median=" << report.median << " count=" << report.count << '\n';
}

void cmd_synth(const Common& common, const SynthArgs& args) {
  if (args.cameras == 0 || args.images == 0) {
    throw Error(ErrorKind::configuration, "synth needs at least one camera and one image");
  }
  if (!args.curves.empty() && args.curves.size() != args.cameras) {
    throw Error(ErrorKind::configuration, "give one curve index per camera");
  }
  const DorfDatabase dorf = load_reference(args.dorf);
  std::mt19937_64 rng(common.seed);
  std::uniform_int_distribution<std::size_t> pick(0, dorf.size() - 1);

  RandomSceneOptions options;
  options.images = args.images;
  options.patches = args.patches;
  options.noise_sigma = args.sigma;
  options.tint = args.tint;
  options.offset_max = args.offset;
  options.colourful = args.colourful;

  const fs::path out = prepare_out(common);
  json manifest;
  manifest["seed"] = common.seed;
  manifest["annotations"] = "annotations.json";
  manifest["cameras"] = json::array();
  json truth;
  truth["seed"] = common.seed;
  truth["cameras"] = json::array();
  std::vector<PatchAnnotation> all_annotations;
  std::vector<Rgb> reflectances;

  for (std::size_t c = 0; c < args.cameras; ++c) {
    const std::size_t index = args.curves.empty() ? pick(rng) : args.curves[c];
    if (index >= dorf.size()) {
      throw Error(ErrorKind::configuration, "curve index " + std::to_string(index) + " out of range");
    }
    SyntheticSceneSpec spec = random_scene_spec(options, dorf.curve(index), common.seed + c);
    // Every camera looks at the same patches.
    if (c == 0) reflectances = spec.reflectances;
    else spec.reflectances = reflectances;
    const SyntheticScene scene = generate_scene(spec);

    json cam;
    cam["name"] = "cam" + std::to_string(c);
    cam["images"] = json::array();
    auto text = png_text(common);
    text["crf"] = dorf.curve(index).name();
    for (std::size_t i = 0; i < scene.images.size(); ++i) {
      const std::string stem = "cam" + std::to_string(c) + "_img" + std::to_string(i);
      write_png((out / (stem + ".png")).string(), scene.images[i], text, args.bit_depth);
      cam["images"].push_back(stem + ".png");
      for (auto a : scene.annotations[i]) {
        a.image_id = stem;
        all_annotations.push_back(a);
      }
    }
    manifest["cameras"].push_back(cam);

    json gains = json::array();
    for (const Rgb& g : spec.gains) gains.push_back({g.r, g.g, g.b});
    truth["cameras"].push_back({{"curve_index", index},
                                {"curve_name", dorf.curve(index).name()},
                                {"gains", gains},
                                {"offsets", spec.offsets}});
  }
  write_text_file((out / "annotations.json").string(), annotations_to_json(all_annotations));
  write_text_file((out / "manifest.json").string(), manifest.dump(2));
  write_text_file((out / "truth.json").string(), truth.dump(2));
  std::cout << "wrote " << args.cameras * args.images << " images to " << out.string() << '\n';
}

}  // namespace rcc::cli
