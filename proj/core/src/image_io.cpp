#include "rcc/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <jpeglib.h>
#include <png.h>
#include <json.hpp>

#include "rcc/error.hpp"

namespace rcc {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return f;
}

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void png_error_handler(png_structp png, png_const_charp message) {
  auto* msg = static_cast<std::string*>(png_get_error_ptr(png));
  if (msg) *msg = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

ImageBuffer read_png(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (!png) throw Error(ErrorKind::io, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int depth = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::io, "'" + path + "': " + message);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  if (png_get_bit_depth(png, info) == 16) png_set_swap(png);
  png_read_update_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (depth == 16) {
      const auto* p = reinterpret_cast<const std::uint16_t*>(data.data()) + 3 * i;
      pixels[i] = {p[0] / 65535.0, p[1] / 65535.0, p[2] / 65535.0};
    } else {
      const png_byte* p = data.data() + 3 * i;
      pixels[i] = {p[0] / 255.0, p[1] / 255.0, p[2] / 255.0};
    }
  }
  return ImageBuffer(width, height, std::move(pixels));
}

namespace {

// Kept free of C++ objects so the longjmp out of libpng skips nothing.
bool encode_png(std::FILE* file, std::string* message, std::size_t w, std::size_t h, int bit_depth,
                png_bytep* rows, png_text* chunks, int chunk_count) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, message, png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bit_depth,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (chunk_count > 0) png_set_text(png, info, chunks, chunk_count);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

void write_png(const std::string& path, const ImageBuffer& image,
               const std::map<std::string, std::string>& text, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorKind::configuration, "PNG bit depth must be 8 or 16");
  }
  if (image.empty()) throw Error(ErrorKind::io, "refusing to write an empty image");

  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const std::size_t bytes = static_cast<std::size_t>(bit_depth / 8);
  std::vector<png_byte> data(w * h * 3 * bytes);
  const double scale = bit_depth == 8 ? 255.0 : 65535.0;
  for (std::size_t i = 0; i < w * h; ++i) {
    const Rgb& p = image.pixels()[i];
    for (int c = 0; c < 3; ++c) {
      const auto v = static_cast<unsigned>(std::lround(std::clamp(p[c], 0.0, 1.0) * scale));
      const std::size_t at = 3 * i + static_cast<std::size_t>(c);
      if (bytes == 1) {
        data[at] = static_cast<png_byte>(v);
      } else {
        data[2 * at] = static_cast<png_byte>(v >> 8);
        data[2 * at + 1] = static_cast<png_byte>(v & 0xff);
      }
    }
  }
  std::vector<png_bytep> rows(h);
  for (std::size_t y = 0; y < h; ++y) rows[y] = data.data() + y * w * 3 * bytes;

  std::vector<std::string> keys;
  std::vector<std::string> values;
  for (const auto& [k, v] : text) {
    keys.push_back(k);
    values.push_back(v);
  }
  std::vector<png_text> chunks(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
    chunks[i].key = keys[i].data();
    chunks[i].text = values[i].data();
    chunks[i].text_length = values[i].size();
  }

  FilePtr file = open_file(path, "wb");
  std::string message = "libpng initialisation failed";
  if (!encode_png(file.get(), &message, w, h, bit_depth, rows.data(), chunks.data(),
                  static_cast<int>(chunks.size()))) {
    throw Error(ErrorKind::io, "'" + path + "': " + message);
  }
}

std::map<std::string, std::string> read_png_text(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (!png) throw Error(ErrorKind::io, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  std::map<std::string, std::string> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::io, "'" + path + "': " + message);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  png_textp chunks = nullptr;
  int count = 0;
  png_get_text(png, info, &chunks, &count);
  for (int i = 0; i < count; ++i) {
    out[chunks[i].key] = std::string(chunks[i].text, chunks[i].text_length);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

namespace {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace

ImageBuffer read_jpeg(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<unsigned char> data;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorKind::io, "'" + path + "': " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const std::size_t w = cinfo.output_width;
  const std::size_t h = cinfo.output_height;
  data.resize(w * h * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = data.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  std::vector<Rgb> pixels(w * h);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {data[3 * i] / 255.0, data[3 * i + 1] / 255.0, data[3 * i + 2] / 255.0};
  }
  return ImageBuffer(w, h, std::move(pixels));
}

ImageBuffer read_image(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".jpg" || ext == ".jpeg") return read_jpeg(path);
  throw Error(ErrorKind::io, "unsupported image format '" + path + "'");
}

std::string annotations_to_json(const std::vector<PatchAnnotation>& annotations) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : annotations) {
    j.push_back({{"image_id", a.image_id},
                 {"patch_id", a.patch_id},
                 {"x", a.region.x},
                 {"y", a.region.y},
                 {"w", a.region.w},
                 {"h", a.region.h}});
  }
  return j.dump(2);
}

std::vector<PatchAnnotation> annotations_from_json(const std::string& text) {
  std::vector<PatchAnnotation> out;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw Error(ErrorKind::parse, "annotation file must hold a JSON array");
    for (const auto& e : j) {
      PatchAnnotation a;
      a.image_id = e.value("image_id", std::string());
      a.patch_id = e.at("patch_id").get<int>();
      a.region = {e.at("x").get<std::size_t>(), e.at("y").get<std::size_t>(),
                  e.at("w").get<std::size_t>(), e.at("h").get<std::size_t>()};
      out.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("bad annotation file: ") + e.what());
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace rcc
