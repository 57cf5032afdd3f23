#pragma once

#include <map>
#include <string>
#include <vector>

#include "rcc/image.hpp"

namespace rcc {

/// 8- or 16-bit PNG in any colour type; alpha is dropped and grey expanded.
ImageBuffer read_png(const std::string& path);
/// Baseline or progressive JPEG.
ImageBuffer read_jpeg(const std::string& path);
/// Dispatches on the file extension (.png, .jpg, .jpeg).
ImageBuffer read_image(const std::string& path);

/// Writes an RGB PNG, quantising each channel by rounding. Text entries are
/// stored as tEXt chunks (used for the root seed).
void write_png(const std::string& path, const ImageBuffer& image,
               const std::map<std::string, std::string>& text = {}, int bit_depth = 8);

/// Reads the tEXt chunks of a PNG.
std::map<std::string, std::string> read_png_text(const std::string& path);

/// [{"image_id", "patch_id", "x", "y", "w", "h"}, ...]
std::string annotations_to_json(const std::vector<PatchAnnotation>& annotations);
std::vector<PatchAnnotation> annotations_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rcc
