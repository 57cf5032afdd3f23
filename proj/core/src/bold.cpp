#include "rcc/bold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "rcc/error.hpp"

namespace rcc {

void BoldParams::validate() const {
  if (samples < 3) throw Error(ErrorKind::configuration, "BoLD sample count must be >= 3");
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || lambda1 < 0.0 || lambda2 < 0.0) {
    throw Error(ErrorKind::configuration, "BoLD weights must be finite and non-negative");
  }
}

CcpMatrix sort_columns(const CcpMatrix& ccps) {
  if (ccps.empty()) throw Error(ErrorKind::insufficient_data, "CCP matrix is empty");
  const std::vector<double> means = ccps.column_means();
  std::vector<std::size_t> order(ccps.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
  CcpMatrix out(ccps.rows(), ccps.cols());
  for (std::size_t i = 0; i < ccps.rows(); ++i) {
    for (std::size_t j = 0; j < ccps.cols(); ++j) out(i, j) = ccps(i, order[j]);
  }
  return out;
}

CcpMatrix linearise_ccps(const CcpMatrix& ccps, std::span<const double> icrf) {
  CcpMatrix out(ccps.rows(), ccps.cols());
  for (std::size_t i = 0; i < ccps.rows(); ++i) {
    for (std::size_t j = 0; j < ccps.cols(); ++j) {
      const double v = ccps(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::domain, "CCP entry outside [0,1] cannot be linearised");
      }
      out(i, j) = interpolate_samples(icrf, v);
    }
  }
  return out;
}

CcpMatrix linearise_ccps(const CcpMatrix& ccps, const ResponseCurve& icrf) {
  return linearise_ccps(ccps, icrf.samples());
}

RowAlignment align_rows(const CcpMatrix& sorted) {
  const std::size_t m = sorted.rows();
  const std::size_t n = sorted.cols();
  if (m == 0 || n < 2) {
    throw Error(ErrorKind::insufficient_data, "row alignment needs at least two columns");
  }
  double first_target = 0.0;
  double last_target = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    first_target += sorted(i, 0);
    last_target += sorted(i, n - 1);
  }
  first_target /= static_cast<double>(m);
  last_target /= static_cast<double>(m);

  RowAlignment result{CcpMatrix(m, n), std::vector<AffineMap>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const double first = sorted(i, 0);
    const double last = sorted(i, n - 1);
    if (first == last) {
      throw Error(ErrorKind::degenerate_row,
                  "row " + std::to_string(i) + " has equal first and last entries");
    }
    AffineMap& map = result.maps[i];
    map.alpha = (last_target - first_target) / (last - first);
    map.beta = first_target - map.alpha * first;
    for (std::size_t j = 0; j < n; ++j) result.aligned(i, j) = map.alpha * sorted(i, j) + map.beta;
    // Pin the end columns so they equal their targets bit-for-bit.
    result.aligned(i, 0) = first_target;
    result.aligned(i, n - 1) = last_target;
  }
  return result;
}

DistanceCurves mean_distance_curve(const CcpMatrix& aligned, bool normalise) {
  const std::size_t m = aligned.rows();
  const std::size_t n = aligned.cols();
  if (m == 0 || n == 0) throw Error(ErrorKind::insufficient_data, "CCP matrix is empty");

  DistanceCurves out;
  out.mean_ccp = aligned.column_means();
  double scale = 1.0;
  if (normalise) {
    const double range = out.mean_ccp.back() - out.mean_ccp.front();
    if (!(std::abs(range) > 1e-12)) {
      throw Error(ErrorKind::degenerate_row, "aligned intensity range collapses to zero");
    }
    scale = 1.0 / std::abs(range);
  }
  out.distances = CcpMatrix(m, n);
  out.mean_distance.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(aligned(i, j) - out.mean_ccp[j]) * scale;
      out.distances(i, j) = d;
      out.mean_distance[j] += d;
    }
  }
  for (double& v : out.mean_distance) v /= static_cast<double>(m);
  return out;
}

double sample_skewness(std::span<const double> x) noexcept {
  const auto s = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= s;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= s;
  m3 /= s;
  if (m2 < 1e-12) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

std::vector<double> uniform_resample(std::span<const double> curve, std::size_t s) {
  std::vector<double> out(s);
  for (std::size_t k = 0; k < s; ++k) {
    out[k] = interpolate_samples(curve, static_cast<double>(k) / static_cast<double>(s - 1));
  }
  return out;
}

namespace {

BoldBreakdown combine(std::span<const double> mean_distance, double eta, const BoldParams& params) {
  BoldBreakdown out;
  out.mean_distance.assign(mean_distance.begin(), mean_distance.end());
  const auto [lo, hi] = std::minmax_element(mean_distance.begin(), mean_distance.end());
  out.eta = eta;
  out.phi = *hi + *lo - 1.0;
  out.mu = std::accumulate(mean_distance.begin(), mean_distance.end(), 0.0);
  out.bold = std::hypot(out.eta - params.lambda1 * out.phi, params.lambda2 * out.mu);
  return out;
}

void require_points(std::size_t n) {
  if (n < 3) {
    throw Error(ErrorKind::insufficient_data,
                "BoLD needs at least 3 patches, got " + std::to_string(n));
  }
}

}  // namespace

BoldBreakdown bold_value(std::span<const double> mean_distance, const BoldParams& params) {
  require_points(mean_distance.size());
  params.validate();
  const std::vector<double> x =
      uniform_resample(mean_distance, static_cast<std::size_t>(params.samples));
  return combine(mean_distance, sample_skewness(x), params);
}

BoldBreakdown bold_value(const DistanceCurves& curves, const BoldParams& params) {
  if (params.source == SkewSource::mean_curve) return bold_value(curves.mean_distance, params);
  require_points(curves.mean_distance.size());
  params.validate();
  return combine(curves.mean_distance, sample_skewness(curves.distances.values()), params);
}

BoldBreakdown evaluate_candidate(const CcpMatrix& intensity, std::span<const double> icrf,
                                 const BoldParams& params) {
  const CcpMatrix sorted = sort_columns(intensity);
  const CcpMatrix linear = linearise_ccps(sorted, icrf);
  const RowAlignment alignment = align_rows(linear);
  const DistanceCurves curves = mean_distance_curve(alignment.aligned, params.normalise_distances);
  return bold_value(curves, params);
}

BoldBreakdown evaluate_candidate(const CcpMatrix& intensity, const ResponseCurve& icrf,
                                 const BoldParams& params) {
  return evaluate_candidate(intensity, icrf.samples(), params);
}

void write_distance_csv(std::ostream& out, const BoldBreakdown& breakdown) {
  out << "column,mean_distance\n";
  for (std::size_t j = 0; j < breakdown.mean_distance.size(); ++j) {
    out << j << ',' << breakdown.mean_distance[j] << '\n';
  }
}

}  // namespace rcc
