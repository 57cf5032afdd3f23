#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rcc::cli {

struct Common {
  std::string out = ".";
  std::size_t workers = 0;
  std::uint64_t seed = 0;
};

struct CalibrateArgs {
  std::vector<std::string> images;
  std::string annotations;
  std::string method = "select";
  std::string dorf;   ///< empty: built-in surrogate database
  std::string emor;   ///< empty: basis derived from the database
  double lambda1 = -1.0;  ///< negative: method default
  double lambda2 = -1.0;
  int restarts = 50;
  int epochs = 600;
  std::size_t k = 5;
};

struct LineariseArgs {
  std::string icrf;
  std::vector<std::string> images;
  std::string mode = "per-channel";
};

struct MatchArgs {
  std::string source;
  std::string target;
  std::string source_annotations;
  std::string target_annotations;
};

struct EvaluateArgs {
  std::string manifest;
  std::string metric = "de2000";
  bool align = false;
  std::vector<int> match_patches{18, 14};
};

struct SynthArgs {
  std::size_t cameras = 1;
  std::size_t images = 4;
  std::size_t patches = 24;
  double sigma = 0.005;
  double tint = 0.05;
  double offset = 0.0;
  bool colourful = false;
  std::vector<std::size_t> curves;
  std::string dorf;
  int bit_depth = 8;
};

void cmd_calibrate(const Common& common, const CalibrateArgs& args);
void cmd_linearise(const Common& common, const LineariseArgs& args);
void cmd_match(const Common& common, const MatchArgs& args);
void cmd_evaluate(const Common& common, const EvaluateArgs& args);
void cmd_synth(const Common& common, const SynthArgs& args);

}  // namespace rcc::cli
