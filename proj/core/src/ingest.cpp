#include "rcc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rcc/error.hpp"

namespace rcc {

DorfDatabase::DorfDatabase(std::vector<DorfRecord> records, std::vector<std::string> warnings)
    : records_(std::move(records)),
      warnings_(std::move(warnings)),
      cache_(std::make_shared<InverseCache>(records_.size())) {}

const ResponseCurve& DorfDatabase::inverse(std::size_t i) const {
  if (i >= records_.size()) {
    throw Error(ErrorKind::bounds, "curve index " + std::to_string(i) + " outside database");
  }
  std::lock_guard lock(cache_->mutex);
  std::optional<ResponseCurve>& slot = cache_->slots[i];
  if (!slot) slot.emplace(invert_curve(records_[i].curve));
  return *slot;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) lines.push_back(std::move(t));
  }
  return lines;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

/// Appends the reals on a line to out; false (and out untouched) if any
/// token is not a real.
bool parse_numbers(std::string_view line, std::vector<double>& out) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != ',') ++end;
    double v = 0.0;
    if (!parse_double(line.substr(pos, end - pos), v)) return false;
    values.push_back(v);
    pos = end;
  }
  if (values.empty()) return false;
  out.insert(out.end(), values.begin(), values.end());
  return true;
}

bool is_numeric_line(std::string_view line) {
  std::vector<double> scratch;
  return parse_numbers(line, scratch);
}

struct Label {
  std::string name;
  std::string rest;
};

/// "name =" optionally followed by values on the same line.
std::optional<Label> parse_label(const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos || eq == 0) return std::nullopt;
  std::string name = trim(std::string_view(line).substr(0, eq));
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return std::nullopt;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '_')) {
      return std::nullopt;
    }
  }
  Label label{std::move(name), trim(std::string_view(line).substr(eq + 1))};
  if (!label.rest.empty() && !is_numeric_line(label.rest)) return std::nullopt;
  return label;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class DorfReader {
 public:
  explicit DorfReader(std::vector<std::string> lines) : lines_(std::move(lines)) {}

  bool done() const { return pos_ >= lines_.size(); }

  std::string next_text(std::size_t block, const char* what) {
    if (done()) fail(block, std::string("truncated before ") + what);
    const std::string& line = lines_[pos_];
    if (is_numeric_line(line) || parse_label(line)) {
      fail(block, std::string("expected ") + what + ", found '" + line.substr(0, 40) + "'");
    }
    return lines_[pos_++];
  }

  std::vector<double> next_values(std::size_t block, const char* what) {
    if (done()) fail(block, std::string("truncated before ") + what + " values");
    std::vector<double> values;
    if (auto label = parse_label(lines_[pos_])) {
      ++pos_;
      if (!label->rest.empty()) parse_numbers(label->rest, values);
      while (!done() && parse_numbers(lines_[pos_], values)) ++pos_;
    } else if (parse_numbers(lines_[pos_], values)) {
      ++pos_;
    } else {
      fail(block, std::string("expected ") + what + " values, found '" +
                      lines_[pos_].substr(0, 40) + "'");
    }
    if (values.empty()) fail(block, std::string("no ") + what + " values");
    return values;
  }

  [[noreturn]] static void fail(std::size_t block, const std::string& why) {
    throw Error(ErrorKind::parse, "DoRF block " + std::to_string(block) + ": " + why);
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

/// Normalises and (if needed) resamples one block onto a uniform grid of
/// the same size. Returns nullopt with a reason when the curve is rejected.
std::optional<std::vector<double>> normalise_dorf_curve(const std::vector<double>& irradiance,
                                                        const std::vector<double>& brightness,
                                                        std::string& reason) {
  const std::size_t n = irradiance.size();
  const double x0 = irradiance.front();
  const double span = irradiance.back() - x0;
  std::vector<double> x(n);
  bool uniform = true;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (irradiance[i] - x0) / span;
    const double expected = static_cast<double>(i) / static_cast<double>(n - 1);
    if (std::abs(x[i] - expected) > 1e-6) uniform = false;
  }

  const double b0 = brightness.front();
  const double brange = brightness.back() - b0;
  if (!(brange > 0.0)) {
    reason = "brightness does not increase from first to last sample";
    return std::nullopt;
  }
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (brightness[i] - b0) / brange;

  const double violation = monotonicity_violation(b);
  if (violation > kDorfRepairTolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "non-monotone brightness (violation %.3g)", violation);
    reason = buf;
    return std::nullopt;
  }
  for (std::size_t i = 1; i < n; ++i) b[i] = std::max(b[i], b[i - 1]);

  if (!uniform) {
    std::vector<double> resampled(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      while (k + 2 < n && x[k + 1] < t) ++k;
      const double w = (t - x[k]) / (x[k + 1] - x[k]);
      resampled[i] = b[k] + std::clamp(w, 0.0, 1.0) * (b[k + 1] - b[k]);
    }
    b = std::move(resampled);
  }
  for (double& v : b) v = std::clamp(v, 0.0, 1.0);
  b.front() = 0.0;
  b.back() = 1.0;
  return b;
}

std::string format_values(std::span<const double> values, std::size_t per_line) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", values[i]);
    out += buf;
    out += ((i + 1) % per_line == 0 || i + 1 == values.size()) ? '\n' : ' ';
  }
  return out;
}

}  // namespace

DorfDatabase parse_dorf(std::istream& in) {
  DorfReader reader(read_lines(in));
  if (reader.done()) throw Error(ErrorKind::parse, "DoRF stream is empty");

  std::vector<DorfRecord> records;
  std::vector<std::string> warnings;
  for (std::size_t block = 0; !reader.done(); ++block) {
    std::string name = reader.next_text(block, "curve name");
    std::string type = reader.next_text(block, "curve type");
    std::vector<double> irradiance = reader.next_values(block, "irradiance");
    std::vector<double> brightness = reader.next_values(block, "brightness");
    if (irradiance.size() != brightness.size()) {
      DorfReader::fail(block, "irradiance has " + std::to_string(irradiance.size()) +
                                  " values, brightness has " + std::to_string(brightness.size()));
    }
    if (irradiance.size() < 2) DorfReader::fail(block, "fewer than two samples");
    for (std::size_t i = 1; i < irradiance.size(); ++i) {
      if (!(irradiance[i] > irradiance[i - 1])) {
        DorfReader::fail(block, "irradiance axis is not strictly ascending");
      }
    }
    std::string reason;
    auto samples = normalise_dorf_curve(irradiance, brightness, reason);
    if (!samples) {
      warnings.push_back("block " + std::to_string(block) + " '" + name + "' rejected: " + reason);
      continue;
    }
    records.push_back({ResponseCurve(std::move(name), std::move(*samples)), std::move(type)});
  }
  return DorfDatabase(std::move(records), std::move(warnings));
}

DorfDatabase load_dorf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open DoRF file '" + path + "'");
  return parse_dorf(in);
}

EmorBasis parse_emor(std::istream& in, EmorKind kind) {
  const std::vector<std::string> lines = read_lines(in);
  if (lines.empty()) throw Error(ErrorKind::parse, "EMoR stream is empty");

  std::vector<std::pair<std::string, std::vector<double>>> blocks;
  for (const std::string& line : lines) {
    if (auto label = parse_label(line)) {
      blocks.emplace_back(lower(label->name), std::vector<double>{});
      if (!label->rest.empty()) parse_numbers(label->rest, blocks.back().second);
      continue;
    }
    if (blocks.empty()) {
      throw Error(ErrorKind::parse, "EMoR values before any block label: '" + line.substr(0, 40) + "'");
    }
    if (!parse_numbers(line, blocks.back().second)) {
      throw Error(ErrorKind::parse, "EMoR block '" + blocks.back().first +
                                        "' has a non-numeric line: '" + line.substr(0, 40) + "'");
    }
  }

  EmorBasis basis;
  basis.kind = kind;
  std::map<int, std::vector<double>> eigen;
  bool have_mean = false;
  for (auto& [name, values] : blocks) {
    if (name == "e") continue;
    if (name == "f0" || name == "g0" || name == "h0" || name == "finv0" || name == "mean") {
      basis.mean = std::move(values);
      have_mean = true;
      continue;
    }
    const auto open = name.find('(');
    const auto close = name.find(')');
    if (open != std::string::npos && close != std::string::npos && close > open + 1) {
      int index = 0;
      const std::string digits = name.substr(open + 1, close - open - 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec == std::errc() && index >= 1) {
        eigen[index] = std::move(values);
        continue;
      }
    }
    throw Error(ErrorKind::parse, "unknown EMoR block '" + name + "'");
  }
  if (!have_mean) throw Error(ErrorKind::parse, "EMoR stream has no mean curve block (f0/g0)");
  int expected = 1;
  for (auto& [index, values] : eigen) {
    if (index != expected++) {
      throw Error(ErrorKind::parse, "EMoR eigenvector " + std::to_string(expected - 1) + " is missing");
    }
    basis.eigenvectors.push_back(std::move(values));
  }
  basis.validate();
  return basis;
}

EmorBasis load_emor(const std::string& path, EmorKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open EMoR file '" + path + "'");
  return parse_emor(in, kind);
}

void write_dorf(std::ostream& out, const DorfDatabase& db) {
  for (std::size_t i = 0; i < db.size(); ++i) {
    const DorfRecord& rec = db.record(i);
    const std::size_t n = rec.curve.size();
    std::vector<double> axis(n);
    for (std::size_t s = 0; s < n; ++s) axis[s] = rec.curve.abscissa(s);
    out << rec.curve.name() << '\n' << rec.type << '\n';
    out << "I =\n" << format_values(axis, n);
    out << "B =\n" << format_values(rec.curve.samples(), n);
  }
}

void write_emor(std::ostream& out, const EmorBasis& basis) {
  basis.validate();
  const bool inverse = basis.kind == EmorKind::inverse;
  const std::size_t n = basis.samples();
  std::vector<double> axis(n);
  for (std::size_t s = 0; s < n; ++s) axis[s] = static_cast<double>(s) / static_cast<double>(n - 1);
  out << "E =\n" << format_values(axis, 4);
  out << (inverse ? "g0 =\n" : "f0 =\n") << format_values(basis.mean, 4);
  for (std::size_t e = 0; e < basis.k(); ++e) {
    out << (inverse ? "hinv(" : "h(") << e + 1 << ")=\n" << format_values(basis.eigenvectors[e], 4);
  }
}

std::string curve_to_json(const ResponseCurve& curve) {
  nlohmann::json j;
  j["name"] = curve.name();
  j["samples"] = std::vector<double>(curve.samples().begin(), curve.samples().end());
  return j.dump();
}

ResponseCurve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    return ResponseCurve(j.value("name", std::string("curve")),
                         j.at("samples").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("curve JSON: ") + e.what());
  }
}

}  // namespace rcc
