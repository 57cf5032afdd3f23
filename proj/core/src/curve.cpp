#include "rcc/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "rcc/error.hpp"

namespace rcc {

namespace {

constexpr double kEndpointTolerance = 1e-6;
constexpr double kRangeTolerance = 1e-9;

}  // namespace

double interpolate_samples(std::span<const double> samples, double x) noexcept {
  const std::size_t last = samples.size() - 1;
  if (x <= 0.0) return samples.front();
  if (x >= 1.0) return samples.back();
  const double pos = x * static_cast<double>(last);
  const auto i = static_cast<std::size_t>(pos);
  if (i >= last) return samples.back();
  const double t = pos - static_cast<double>(i);
  return samples[i] + t * (samples[i + 1] - samples[i]);
}

ResponseCurve::ResponseCurve(std::string name, std::vector<double> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw Error(ErrorKind::dimension, "curve '" + name_ + "' needs at least two samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    double& v = samples_[i];
    if (!std::isfinite(v) || v < -kRangeTolerance || v > 1.0 + kRangeTolerance) {
      throw Error(ErrorKind::domain,
                  "curve '" + name_ + "' sample " + std::to_string(i) + " outside [0,1]");
    }
    v = std::clamp(v, 0.0, 1.0);
    if (i > 0 && v < samples_[i - 1]) {
      throw Error(ErrorKind::monotonicity,
                  "curve '" + name_ + "' decreases at sample " + std::to_string(i));
    }
  }
  if (samples_.front() > kEndpointTolerance || samples_.back() < 1.0 - kEndpointTolerance) {
    throw Error(ErrorKind::domain, "curve '" + name_ + "' is not normalised to endpoints 0 and 1");
  }
}

ResponseCurve ResponseCurve::identity(std::size_t samples) {
  return from_function("identity", [](double x) { return x; }, samples);
}

ResponseCurve ResponseCurve::from_function(std::string name,
                                           const std::function<double(double)>& fn,
                                           std::size_t samples) {
  std::vector<double> values(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    values[i] = fn(static_cast<double>(i) / static_cast<double>(samples - 1));
  }
  return ResponseCurve(std::move(name), std::move(values));
}

double ResponseCurve::operator()(double x) const { return eval_curve(*this, x); }

ResponseCurve ResponseCurve::renamed(std::string name) const {
  ResponseCurve copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

double eval_curve(const ResponseCurve& curve, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::domain, "curve argument " + std::to_string(x) + " outside [0,1]");
  }
  return interpolate_samples(curve.samples(), x);
}

ResponseCurve invert_curve(const ResponseCurve& curve) {
  const std::span<const double> f = curve.samples();
  const std::size_t n = f.size();
  const double step = 1.0 / static_cast<double>(n - 1);

  // Knots (f value, abscissa) with plateaus collapsed to their midpoint.
  std::vector<double> knot_y;
  std::vector<double> knot_x;
  knot_y.reserve(n);
  knot_x.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && f[j + 1] == f[i]) ++j;
    if (j + 1 < n && f[j + 1] < f[i]) {
      throw Error(ErrorKind::monotonicity,
                  "cannot invert '" + curve.name() + "': decreases at sample " +
                      std::to_string(j + 1));
    }
    knot_y.push_back(f[i]);
    knot_x.push_back(0.5 * static_cast<double>(i + j) * step);
    i = j + 1;
  }
  if (knot_y.size() < 2) {
    throw Error(ErrorKind::monotonicity, "cannot invert constant curve '" + curve.name() + "'");
  }

  std::vector<double> inverse(n);
  std::size_t k = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double y = static_cast<double>(s) * step;
    if (y <= knot_y.front()) {
      inverse[s] = knot_x.front();
      continue;
    }
    if (y >= knot_y.back()) {
      inverse[s] = knot_x.back();
      continue;
    }
    while (k + 1 < knot_y.size() && knot_y[k + 1] < y) ++k;
    const double t = (y - knot_y[k]) / (knot_y[k + 1] - knot_y[k]);
    inverse[s] = knot_x[k] + t * (knot_x[k + 1] - knot_x[k]);
  }
  inverse.front() = 0.0;
  inverse.back() = 1.0;
  for (std::size_t s = 1; s < n; ++s) inverse[s] = std::max(inverse[s], inverse[s - 1]);
  return ResponseCurve(curve.name() + "^-1", std::move(inverse));
}

double monotonicity_violation(std::span<const double> samples) noexcept {
  double running = -std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double v : samples) {
    running = std::max(running, v);
    worst = std::max(worst, running - v);
  }
  return worst;
}

ResponseCurve repair_monotone(std::string name, std::span<const double> samples) {
  std::vector<double> out(samples.begin(), samples.end());
  for (double& v : out) v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  const double lo = out.front();
  const double range = out.back() - lo;
  if (!(range > 0.0)) {
    throw Error(ErrorKind::monotonicity, "curve '" + name + "' is flat and cannot be normalised");
  }
  for (double& v : out) v = std::clamp((v - lo) / range, 0.0, 1.0);
  out.front() = 0.0;
  out.back() = 1.0;
  return ResponseCurve(std::move(name), std::move(out));
}

double mean_absolute_deviation(const ResponseCurve& a, const ResponseCurve& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::dimension, "curves have different sample counts");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.samples()[i] - b.samples()[i]);
  return sum / static_cast<double>(a.size());
}

double max_absolute_deviation(const ResponseCurve& a, const ResponseCurve& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::dimension, "curves have different sample counts");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.samples()[i] - b.samples()[i]));
  }
  return worst;
}

EmorBasis EmorBasis::truncated(std::size_t k_keep) const {
  if (k_keep == 0 || k_keep > k()) {
    throw Error(ErrorKind::configuration, "basis has " + std::to_string(k()) +
                                              " eigenvectors, cannot keep " +
                                              std::to_string(k_keep));
  }
  EmorBasis out;
  out.mean = mean;
  out.kind = kind;
  out.eigenvectors.assign(eigenvectors.begin(), eigenvectors.begin() + k_keep);
  if (!scales.empty()) out.scales.assign(scales.begin(), scales.begin() + k_keep);
  return out;
}

void EmorBasis::validate() const {
  if (mean.size() < 2) throw Error(ErrorKind::dimension, "basis mean curve is empty");
  if (eigenvectors.empty()) throw Error(ErrorKind::dimension, "basis has no eigenvectors");
  if (!scales.empty() && scales.size() != eigenvectors.size()) {
    throw Error(ErrorKind::dimension, "basis scales do not match the eigenvector count");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::domain, "basis scales must be positive");
  }
  for (std::size_t i = 0; i < eigenvectors.size(); ++i) {
    if (eigenvectors[i].size() != mean.size()) {
      throw Error(ErrorKind::dimension, "eigenvector " + std::to_string(i + 1) + " has " +
                                            std::to_string(eigenvectors[i].size()) +
                                            " samples, mean has " + std::to_string(mean.size()));
    }
  }
}

std::vector<double> emor_reconstruct(const EmorBasis& basis, const EmorCoefficients& theta) {
  if (theta.theta.size() != basis.k()) {
    throw Error(ErrorKind::dimension, "theta has " + std::to_string(theta.theta.size()) +
                                          " entries, basis has " + std::to_string(basis.k()));
  }
  std::vector<double> out = basis.mean;
  for (std::size_t e = 0; e < basis.k(); ++e) {
    const double w = theta.theta[e];
    if (w == 0.0) continue;
    const std::vector<double>& h = basis.eigenvectors[e];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * h[i];
  }
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

EmorCoefficients emor_project(const EmorBasis& basis, std::span<const double> curve) {
  basis.validate();
  if (curve.size() != basis.samples()) {
    throw Error(ErrorKind::dimension, "curve sample count does not match basis");
  }
  const auto s = static_cast<Eigen::Index>(basis.samples());
  const auto k = static_cast<Eigen::Index>(basis.k());
  Eigen::MatrixXd h(s, k);
  Eigen::VectorXd rhs(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    rhs(i) = curve[static_cast<std::size_t>(i)] - basis.mean[static_cast<std::size_t>(i)];
    for (Eigen::Index e = 0; e < k; ++e) {
      h(i, e) = basis.eigenvectors[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)];
    }
  }
  const Eigen::VectorXd theta = h.colPivHouseholderQr().solve(rhs);
  return {std::vector<double>(theta.data(), theta.data() + theta.size())};
}

}  // namespace rcc
