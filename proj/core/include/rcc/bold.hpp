#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rcc/ccp.hpp"
#include "rcc/curve.hpp"

namespace rcc {

/// Which values feed the skewness statistic.
enum class SkewSource {
  mean_curve,   ///< s uniform samples of the interpolated mean distance curve
  all_entries,  ///< every entry of the per-image distance matrix
};

struct BoldParams {
  double lambda1 = 1.0;
  double lambda2 = 10.0;
  int samples = 100;
  SkewSource source = SkewSource::mean_curve;
  /// Express distances as a fraction of the aligned intensity range
  /// (last minus first column target). Off gives raw linearised units.
  bool normalise_distances = true;

  /// Throws configuration error unless samples >= 3 and weights are finite
  /// and non-negative.
  void validate() const;
};

struct BoldBreakdown {
  double bold = 0.0;
  double eta = 0.0;
  double phi = 0.0;
  double mu = 0.0;
  std::vector<double> mean_distance;
};

struct AffineMap {
  double alpha = 1.0;
  double beta = 0.0;
};

struct RowAlignment {
  CcpMatrix aligned;
  std::vector<AffineMap> maps;
};

struct DistanceCurves {
  std::vector<double> mean_distance;  ///< d-bar, one entry per column
  std::vector<double> mean_ccp;       ///< w-bar, column means of the aligned matrix
  CcpMatrix distances;                ///< |w' - W-bar| per entry
};

/// Stable permutation of columns into non-decreasing column-mean order.
CcpMatrix sort_columns(const CcpMatrix& ccps);

/// Maps every entry through the candidate inverse response.
CcpMatrix linearise_ccps(const CcpMatrix& ccps, std::span<const double> icrf);
CcpMatrix linearise_ccps(const CcpMatrix& ccps, const ResponseCurve& icrf);

/// Per-row affine map taking the row's first and last entries onto the
/// column means of the first and last columns. Throws degenerate_row when a
/// row's first and last entries coincide.
RowAlignment align_rows(const CcpMatrix& sorted);

/// Column-direction statistics of an aligned matrix. With normalise set,
/// distances are divided by (w-bar last - w-bar first).
DistanceCurves mean_distance_curve(const CcpMatrix& aligned, bool normalise = false);

/// Skewness, normalisation and area terms of a mean distance curve, and
/// their combined value. Throws insufficient_data for fewer than 3 entries.
BoldBreakdown bold_value(std::span<const double> mean_distance, const BoldParams& params);
/// Same, drawing the skewness samples from the source selected in params.
BoldBreakdown bold_value(const DistanceCurves& curves, const BoldParams& params);

/// Sample skewness with the 1/s convention in both moments; 0 when the
/// variance is below 1e-12.
double sample_skewness(std::span<const double> x) noexcept;

/// s uniform samples of the piecewise-linear interpolant over [0,1].
std::vector<double> uniform_resample(std::span<const double> curve, std::size_t s);

/// sort -> linearise -> align -> distance curve -> BoLD value.
BoldBreakdown evaluate_candidate(const CcpMatrix& intensity, std::span<const double> icrf,
                                 const BoldParams& params);
BoldBreakdown evaluate_candidate(const CcpMatrix& intensity, const ResponseCurve& icrf,
                                 const BoldParams& params);

/// CSV "column,mean_distance" rows for plotting.
void write_distance_csv(std::ostream& out, const BoldBreakdown& breakdown);

}  // namespace rcc
