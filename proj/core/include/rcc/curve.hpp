#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rcc {

inline constexpr std::size_t kDefaultCurveSamples = 1024;

/// Piecewise-linear evaluation of curve samples laid out uniformly over
/// [0,1]. No domain checking; callers that need it go through eval_curve.
double interpolate_samples(std::span<const double> samples, double x) noexcept;

/// A monotone map [0,1] -> [0,1] sampled on a uniform grid: a CRF or an
/// inverse CRF. Construction validates the DoRF normalisation (endpoints
/// 0 and 1 within 1e-6), the range and monotonicity.
class ResponseCurve {
 public:
  ResponseCurve(std::string name, std::vector<double> samples);

  static ResponseCurve identity(std::size_t samples = kDefaultCurveSamples);
  /// Samples fn at the grid abscissae; fn must already satisfy the invariants.
  static ResponseCurve from_function(std::string name, const std::function<double(double)>& fn,
                                     std::size_t samples = kDefaultCurveSamples);

  const std::string& name() const noexcept { return name_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double abscissa(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(samples_.size() - 1);
  }

  double operator()(double x) const;

  ResponseCurve renamed(std::string name) const;

  friend bool operator==(const ResponseCurve&, const ResponseCurve&) = default;

 private:
  std::string name_;
  std::vector<double> samples_;
};

/// Throws domain error for x outside [0,1].
double eval_curve(const ResponseCurve& curve, double x);

/// Numerical inverse on the same grid. Runs of equal samples are collapsed
/// to their midpoint abscissa; a decreasing step throws monotonicity error.
ResponseCurve invert_curve(const ResponseCurve& curve);

/// Isotonic repair by cumulative maximum, clamping to [0,1] and an affine
/// renormalisation of the endpoints to {0, 1}.
ResponseCurve repair_monotone(std::string name, std::span<const double> samples);

/// Largest amount by which a sample falls below its running maximum.
double monotonicity_violation(std::span<const double> samples) noexcept;

double mean_absolute_deviation(const ResponseCurve& a, const ResponseCurve& b);
double max_absolute_deviation(const ResponseCurve& a, const ResponseCurve& b);

enum class EmorKind { forward, inverse };

/// Mean curve plus eigenvector basis of an empirical response model.
struct EmorBasis {
  std::vector<double> mean;
  std::vector<std::vector<double>> eigenvectors;
  EmorKind kind = EmorKind::forward;
  /// Typical coefficient magnitude per eigenvector, used to precondition
  /// the optimiser. Empty means 1 for every component.
  std::vector<double> scales;

  std::size_t k() const noexcept { return eigenvectors.size(); }
  std::size_t samples() const noexcept { return mean.size(); }
  /// Basis restricted to its first k eigenvectors.
  EmorBasis truncated(std::size_t k) const;
  /// Throws dimension error on inconsistent sample counts or k == 0.
  void validate() const;
};

struct EmorCoefficients {
  std::vector<double> theta;
};

/// mean + sum(theta_i * h_i) clamped to [0,1]. Unlike ResponseCurve the
/// result is not required to be monotone.
std::vector<double> emor_reconstruct(const EmorBasis& basis, const EmorCoefficients& theta);

/// Least-squares coefficients of a curve in the basis (eigenvectors need not
/// be orthonormal).
EmorCoefficients emor_project(const EmorBasis& basis, std::span<const double> curve);

}  // namespace rcc
