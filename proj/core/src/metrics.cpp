#include "rcc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "rcc/error.hpp"
#include "rcc/parallel.hpp"

namespace rcc {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::dimension, "colour sequences differ in length");
  if (a == 0) throw Error(ErrorKind::insufficient_data, "colour sequences are empty");
}

double srgb_decode(double v) noexcept {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double lab_f(double t) noexcept {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

double rmse(std::span<const Rgb> a, std::span<const Rgb> b) {
  require_same_length(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dr = a[i].r - b[i].r;
    const double dg = a[i].g - b[i].g;
    const double db = a[i].b - b[i].b;
    sum += dr * dr + dg * dg + db * db;
  }
  return 255.0 * std::sqrt(sum / static_cast<double>(a.size()));
}

double rae(const Rgb& a, const Rgb& b) {
  const double na = std::sqrt(a.r * a.r + a.g * a.g + a.b * a.b);
  const double nb = std::sqrt(b.r * b.r + b.g * b.g + b.b * b.b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::zero_vector, "angular error of a zero vector");
  const double c = (a.r * b.r + a.g * b.g + a.b * b.b) / (na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0)) * kDeg;
}

double rae(std::span<const Rgb> a, std::span<const Rgb> b) {
  require_same_length(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += rae(a[i], b[i]);
  return sum / static_cast<double>(a.size());
}

Lab srgb_to_lab(const Rgb& rgb) noexcept {
  const double r = srgb_decode(rgb.r);
  const double g = srgb_decode(rgb.g);
  const double b = srgb_decode(rgb.b);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / 0.95047);
  const double fy = lab_f(y / 1.0);
  const double fz = lab_f(z / 1.08883);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e2000(const Lab& x, const Lab& y) noexcept {
  const double c1 = std::hypot(x.a, x.b);
  const double c2 = std::hypot(y.a, y.b);
  const double c_bar = 0.5 * (c1 + c2);
  const double c_bar7 = std::pow(c_bar, 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + std::pow(25.0, 7.0))));
  const double a1 = (1.0 + g) * x.a;
  const double a2 = (1.0 + g) * y.a;
  const double cp1 = std::hypot(a1, x.b);
  const double cp2 = std::hypot(a2, y.b);

  auto hue = [](double b, double a) {
    if (a == 0.0 && b == 0.0) return 0.0;
    double h = std::atan2(b, a) * kDeg;
    return h < 0.0 ? h + 360.0 : h;
  };
  const double h1 = hue(x.b, a1);
  const double h2 = hue(y.b, a2);

  const double dl = y.l - x.l;
  const double dc = cp2 - cp1;
  double dh = 0.0;
  if (cp1 * cp2 != 0.0) {
    dh = h2 - h1;
    if (dh > 180.0) dh -= 360.0;
    else if (dh < -180.0) dh += 360.0;
  }
  const double dH = 2.0 * std::sqrt(cp1 * cp2) * std::sin(0.5 * dh / kDeg);

  const double l_bar = 0.5 * (x.l + y.l);
  const double cp_bar = 0.5 * (cp1 + cp2);
  double h_bar = h1 + h2;
  if (cp1 * cp2 != 0.0) {
    if (std::abs(h1 - h2) <= 180.0) h_bar *= 0.5;
    else if (h1 + h2 < 360.0) h_bar = 0.5 * (h1 + h2 + 360.0);
    else h_bar = 0.5 * (h1 + h2 - 360.0);
  }

  const double t = 1.0 - 0.17 * std::cos((h_bar - 30.0) / kDeg) +
                   0.24 * std::cos((2.0 * h_bar) / kDeg) +
                   0.32 * std::cos((3.0 * h_bar + 6.0) / kDeg) -
                   0.20 * std::cos((4.0 * h_bar - 63.0) / kDeg);
  const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
  const double cp_bar7 = std::pow(cp_bar, 7.0);
  const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + std::pow(25.0, 7.0)));
  const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
  const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
  const double sc = 1.0 + 0.045 * cp_bar;
  const double sh = 1.0 + 0.015 * cp_bar * t;
  const double rt = -std::sin(2.0 * d_theta / kDeg) * rc;

  const double tl = dl / sl;
  const double tc = dc / sc;
  const double th = dH / sh;
  return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double delta_e2000(const Rgb& x, const Rgb& y) noexcept {
  return delta_e2000(srgb_to_lab(x), srgb_to_lab(y));
}

double delta_e2000(std::span<const Rgb> a, std::span<const Rgb> b) {
  require_same_length(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += delta_e2000(a[i], b[i]);
  return sum / static_cast<double>(a.size());
}

double br_ratio(const ColorPatchSample& sample) {
  const Chromaticity c = chromaticity(sample.rgb);
  if (c.r <= 0.0 || c.b <= 0.0) {
    throw Error(ErrorKind::undefined_ratio, "blue/red ratio needs non-zero chromaticities");
  }
  return std::max(c.b / c.r, c.r / c.b);
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::rmse: return "rmse";
    case Metric::rae: return "rae";
    case Metric::de2000: return "de2000";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  if (text == "rmse") return Metric::rmse;
  if (text == "rae") return Metric::rae;
  if (text == "de2000" || text == "deltae" || text == "de") return Metric::de2000;
  throw Error(ErrorKind::configuration, "unknown metric '" + std::string(text) + "'");
}

double measure(Metric metric, std::span<const Rgb> a, std::span<const Rgb> b) {
  switch (metric) {
    case Metric::rmse: return rmse(a, b);
    case Metric::rae: return rae(a, b);
    case Metric::de2000: return delta_e2000(a, b);
  }
  throw Error(ErrorKind::configuration, "unknown metric");
}

std::size_t handshake_single_count(std::size_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

std::size_t handshake_cross_count(std::size_t m, std::size_t c) noexcept {
  if (m < 2 || c < 2) return 0;
  return m * (m - 1) * c * (c - 1) / 4;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::insufficient_data, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

HandshakeReport handshake_evaluate(const std::vector<std::vector<std::vector<Rgb>>>& groups,
                                   Metric metric, const HandshakePipeline& pipeline,
                                   std::size_t workers) {
  std::size_t total = 0;
  for (const auto& g : groups) total += g.size();
  if (total < 2) throw Error(ErrorKind::insufficient_data, "handshake needs at least 2 images");

  const std::size_t c = groups.size();
  struct Job {
    HandshakeComparison cmp;
    bool pooled = false;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      const bool pooled = c == 1 || a < b;
      for (std::size_t i = 0; i < groups[a].size(); ++i) {
        for (std::size_t j = i + 1; j < groups[b].size(); ++j) {
          jobs.push_back({{a, i, b, j, 0.0}, pooled});
        }
      }
    }
  }

  std::vector<std::vector<HandshakeItem>> items(c);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t i = 0; i < groups[a].size(); ++i) items[a].push_back({a, i, groups[a][i]});
  }

  parallel_for(jobs.size(), workers, [&](std::size_t k) {
    HandshakeComparison& cmp = jobs[k].cmp;
    const HandshakeItem& src = items[cmp.source_camera][cmp.source_image];
    const HandshakeItem& dst = items[cmp.target_camera][cmp.target_image];
    if (pipeline) {
      const auto [aligned, reference] = pipeline(src, dst);
      cmp.value = measure(metric, aligned, reference);
    } else {
      cmp.value = measure(metric, src.ccps, dst.ccps);
    }
  });

  HandshakeReport report;
  report.metric = metric;
  report.cameras = c;
  report.pairwise.assign(c, std::vector<double>(c, std::nan("")));
  std::vector<std::vector<std::vector<double>>> cells(c, std::vector<std::vector<double>>(c));
  for (const Job& job : jobs) {
    cells[job.cmp.source_camera][job.cmp.target_camera].push_back(job.cmp.value);
    if (job.pooled) {
      report.comparisons.push_back(job.cmp);
      report.pooled.push_back(job.cmp.value);
    }
  }
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      if (!cells[a][b].empty()) report.pairwise[a][b] = median_of(cells[a][b]);
    }
  }
  report.count = report.pooled.size();
  if (report.count == 0) {
    throw Error(ErrorKind::insufficient_data, "no comparisons could be formed");
  }
  report.median = median_of(report.pooled);
  return report;
}

void write_pairwise_csv(std::ostream& out, const HandshakeReport& report) {
  out << "source\\target";
  for (std::size_t b = 0; b < report.cameras; ++b) out << ",camera" << b;
  out << '\n';
  for (std::size_t a = 0; a < report.cameras; ++a) {
    out << "camera" << a;
    for (std::size_t b = 0; b < report.cameras; ++b) {
      out << ',';
      if (!std::isnan(report.pairwise[a][b])) out << report.pairwise[a][b];
    }
    out << '\n';
  }
}

void write_comparisons_csv(std::ostream& out, const HandshakeReport& report) {
  out << "source_camera,source_image,target_camera,target_image," << to_string(report.metric)
      << '\n';
  for (const auto& c : report.comparisons) {
    out << c.source_camera << ',' << c.source_image << ',' << c.target_camera << ','
        << c.target_image << ',' << c.value << '\n';
  }
}

std::string report_to_json(const HandshakeReport& report, std::uint64_t seed) {
  nlohmann::json j;
  j["metric"] = std::string(to_string(report.metric));
  j["median"] = report.median;
  j["count"] = report.count;
  j["cameras"] = report.cameras;
  j["seed"] = seed;
  if (report.metric == Metric::rmse) j["scale"] = "0-255";
  return j.dump(2);
}

namespace {

ImageBuffer scale_channels(const ImageBuffer& image, const Rgb& gain) {
  std::vector<Rgb> out(image.pixels().begin(), image.pixels().end());
  for (Rgb& p : out) p = {p.r * gain.r, p.g * gain.g, p.b * gain.b};
  return ImageBuffer(image.width(), image.height(), std::move(out));
}

}  // namespace

ImageBuffer wb_grey_world(const ImageBuffer& image) {
  if (image.empty()) throw Error(ErrorKind::degenerate_channel, "image is empty");
  Rgb mean;
  for (const Rgb& p : image.pixels()) {
    mean.r += p.r;
    mean.g += p.g;
    mean.b += p.b;
  }
  const auto n = static_cast<double>(image.size());
  mean = {mean.r / n, mean.g / n, mean.b / n};
  if (mean.r <= 0.0 || mean.g <= 0.0 || mean.b <= 0.0) {
    throw Error(ErrorKind::degenerate_channel, "grey world needs non-zero channel means");
  }
  const double grey = mean.sum() / 3.0;
  return scale_channels(image, {grey / mean.r, grey / mean.g, grey / mean.b});
}

ImageBuffer wb_white_patch(const ImageBuffer& image) {
  if (image.empty()) throw Error(ErrorKind::degenerate_channel, "image is empty");
  Rgb peak;
  for (const Rgb& p : image.pixels()) {
    peak.r = std::max(peak.r, p.r);
    peak.g = std::max(peak.g, p.g);
    peak.b = std::max(peak.b, p.b);
  }
  if (peak.r <= 0.0 || peak.g <= 0.0 || peak.b <= 0.0) {
    throw Error(ErrorKind::degenerate_channel, "white patch needs non-zero channel maxima");
  }
  return scale_channels(image, {1.0 / peak.r, 1.0 / peak.g, 1.0 / peak.b});
}

}  // namespace rcc
