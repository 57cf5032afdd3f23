#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcc/bold.hpp"
#include "rcc/ccp.hpp"
#include "rcc/curve.hpp"
#include "rcc/ingest.hpp"

namespace rcc {

enum class CalibrationMethod { selection, optimisation };

std::string_view to_string(CalibrationMethod method) noexcept;
CalibrationMethod parse_method(std::string_view text);

/// BoLD weights tuned per method. Selection ranks fixed database curves and
/// benefits from the normalisation term. The optimiser drifts towards curves
/// that game it, so it runs with lambda1 = 0 and an area weight large enough
/// to dominate the skewness term near the optimum.
BoldParams default_bold_params(CalibrationMethod method) noexcept;

struct OptimParams {
  double psi1 = 1.0;            ///< micro-smoothness weight
  double psi2 = 1.0;            ///< macro-smoothness weight
  int macro_samples = 10;
  int restarts = 50;
  double lr0 = 0.5;
  int decay_steps = 1000;
  double decay_rate = 0.9;
  int max_epochs = 600;
  double tol = 1e-3;
  std::size_t k = 5;
  double monotonicity_weight = 1e3;
  double fd_step = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CostBreakdown {
  double cost = 0.0;
  double bold = 0.0;
  double micro = 0.0;    ///< mean |f''| on the full grid
  double macro = 0.0;    ///< std of f'' over the macro samples
  double penalty = 0.0;  ///< sum of max(0, -f')
  BoldBreakdown feature;
};

struct RestartTrace {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int epochs = 0;
  std::vector<double> theta;
};

struct CalibrationResult {
  ResponseCurve icrf = ResponseCurve::identity();
  double score = 0.0;
  CalibrationMethod method = CalibrationMethod::selection;
  std::string name;             ///< database curve name (selection)
  std::size_t index = 0;        ///< database index (selection)
  std::vector<double> theta;    ///< basis coefficients (optimisation)
  BoldBreakdown diagnostics;
  std::vector<RestartTrace> restarts;
  std::uint64_t seed = 0;
};

/// Exhaustive search over the inverses of every database curve; returns the
/// minimum-BoLD candidate, lowest index on ties. Candidates whose
/// linearisation collapses a row are skipped.
CalibrationResult select_icrf(const CcpMatrix& intensity, const DorfDatabase& dorf,
                              const BoldParams& params, std::size_t workers = 0);

/// Cost of one candidate inverse curve sampled on the uniform grid.
CostBreakdown curve_cost(std::span<const double> icrf, const CcpMatrix& intensity,
                         const BoldParams& bold, const OptimParams& opt);

CostBreakdown optimisation_cost(const EmorCoefficients& theta, const EmorBasis& basis,
                                const CcpMatrix& intensity, const BoldParams& bold,
                                const OptimParams& opt);

/// Sets basis.scales to the RMS coefficient of the database inverses (or
/// forward curves for a forward basis) projected onto the basis.
EmorBasis with_database_scales(EmorBasis basis, const DorfDatabase& dorf);

/// Multi-start Adam descent over basis coefficients with finite-difference
/// gradients. Descent runs in coordinates u = theta / scale, so one unit
/// of step covers each component's typical range; starts are u ~ U(-1,1).
/// Restarts run on the worker pool; each draws its start from
/// (seed, restart index) so the result is independent of scheduling.
CalibrationResult optimise_icrf(const CcpMatrix& intensity, const EmorBasis& basis,
                                const BoldParams& bold, const OptimParams& opt,
                                std::size_t workers = 0);

/// {"method", "name" | "theta", "samples", "score", "seed", "bold": {...}}
std::string calibration_to_json(const CalibrationResult& result);
/// Reads the curve back from a calibration file, or from a plain
/// {"name", "samples"} curve file.
ResponseCurve icrf_from_json(const std::string& text);

}  // namespace rcc
