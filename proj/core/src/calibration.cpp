#include "rcc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "rcc/error.hpp"
#include "rcc/parallel.hpp"

namespace rcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(const CcpMatrix& intensity) {
  if (intensity.rows() < 2) {
    throw Error(ErrorKind::insufficient_data, "calibration needs at least 2 images");
  }
  if (intensity.cols() < 3) {
    throw Error(ErrorKind::insufficient_data, "calibration needs at least 3 patches");
  }
}

// Candidate-independent degeneracy: an image whose darkest and brightest
// patch read the same value can never be aligned.
void require_spread(const CcpMatrix& sorted) {
  for (std::size_t i = 0; i < sorted.rows(); ++i) {
    if (sorted(i, 0) == sorted(i, sorted.cols() - 1)) {
      throw Error(ErrorKind::degenerate_row,
                  "image " + std::to_string(i) + " has no intensity spread across patches");
    }
  }
}

double population_std(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

std::string_view to_string(CalibrationMethod method) noexcept {
  return method == CalibrationMethod::selection ? "select" : "optimise";
}

CalibrationMethod parse_method(std::string_view text) {
  if (text == "select" || text == "selection") return CalibrationMethod::selection;
  if (text == "optimise" || text == "optimize" || text == "optimisation") {
    return CalibrationMethod::optimisation;
  }
  throw Error(ErrorKind::configuration, "unknown calibration method '" + std::string(text) + "'");
}

BoldParams default_bold_params(CalibrationMethod method) noexcept {
  BoldParams p;
  if (method == CalibrationMethod::optimisation) {
    p.lambda1 = 0.0;
    p.lambda2 = 1e4;
  }
  return p;
}

void OptimParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::configuration, what); };
  if (!(psi1 >= 0.0) || !(psi2 >= 0.0)) fail("smoothness weights must be >= 0");
  if (macro_samples < 3) fail("macro sample count must be >= 3");
  if (restarts < 1) fail("restart count must be >= 1");
  if (!(lr0 > 0.0)) fail("initial learning rate must be > 0");
  if (decay_steps < 1) fail("decay steps must be >= 1");
  if (!(decay_rate > 0.0 && decay_rate <= 1.0)) fail("decay rate must be in (0,1]");
  if (max_epochs < 1) fail("max epochs must be >= 1");
  if (!(tol >= 0.0)) fail("tolerance must be >= 0");
  if (k < 1 || k > 11) fail("basis size k must be in [1,11]");
  if (!(monotonicity_weight >= 0.0)) fail("monotonicity weight must be >= 0");
  if (!(fd_step > 0.0)) fail("finite-difference step must be > 0");
}

CalibrationResult select_icrf(const CcpMatrix& intensity, const DorfDatabase& dorf,
                              const BoldParams& params, std::size_t workers) {
  if (dorf.empty()) throw Error(ErrorKind::configuration, "DoRF database is empty");
  require_shape(intensity);
  params.validate();
  require_spread(sort_columns(intensity));

  std::vector<double> scores(dorf.size(), kInf);
  parallel_for(dorf.size(), workers, [&](std::size_t i) {
    try {
      scores[i] = evaluate_candidate(intensity, dorf.inverse(i), params).bold;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_row) throw;
    }
  });

  std::size_t best = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isfinite(scores[i]) && (best == scores.size() || scores[i] < scores[best])) best = i;
  }
  if (best == scores.size()) {
    throw Error(ErrorKind::degenerate_row, "every database candidate collapses an image row");
  }

  CalibrationResult result;
  result.icrf = dorf.inverse(best);
  result.method = CalibrationMethod::selection;
  result.index = best;
  result.name = dorf.curve(best).name();
  result.diagnostics = evaluate_candidate(intensity, result.icrf, params);
  result.score = result.diagnostics.bold;
  return result;
}

CostBreakdown curve_cost(std::span<const double> f, const CcpMatrix& intensity,
                         const BoldParams& bold, const OptimParams& opt) {
  CostBreakdown out;
  const std::size_t n = f.size();

  // Derivatives are grid differences without the 1/h factor, so the
  // weights do not depend on the sample count.
  double micro = 0.0;
  double penalty = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d1 = 0.5 * (f[i + 1] - f[i - 1]);
    const double d2 = f[i + 1] - 2.0 * f[i] + f[i - 1];
    micro += std::abs(d2);
    penalty += std::max(0.0, -d1);
  }
  out.micro = n > 2 ? micro / static_cast<double>(n - 2) : 0.0;
  out.penalty = penalty;

  const auto m = static_cast<std::size_t>(opt.macro_samples);
  std::vector<double> coarse(m);
  for (std::size_t k = 0; k < m; ++k) {
    coarse[k] = interpolate_samples(f, static_cast<double>(k) / static_cast<double>(m - 1));
  }
  std::vector<double> coarse_d2;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    coarse_d2.push_back(coarse[k + 1] - 2.0 * coarse[k] + coarse[k - 1]);
  }
  out.macro = population_std(coarse_d2);

  try {
    out.feature = evaluate_candidate(intensity, f, bold);
    out.bold = out.feature.bold;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_row) throw;
    out.bold = kInf;
  }

  const double a = opt.psi1 * out.micro;
  const double b = opt.psi2 * out.macro;
  out.cost = out.bold * out.bold + a * a + b * b + opt.monotonicity_weight * out.penalty;
  if (!std::isfinite(out.cost)) out.cost = kInf;
  return out;
}

CostBreakdown optimisation_cost(const EmorCoefficients& theta, const EmorBasis& basis,
                                const CcpMatrix& intensity, const BoldParams& bold,
                                const OptimParams& opt) {
  for (double t : theta.theta) {
    if (!std::isfinite(t)) {
      CostBreakdown out;
      out.cost = kInf;
      return out;
    }
  }
  const std::vector<double> f = emor_reconstruct(basis, theta);
  return curve_cost(f, intensity, bold, opt);
}

namespace {

struct RunResult {
  RestartTrace trace;
  std::vector<double> best_theta;
  double best_cost = kInf;
};

RunResult run_restart(std::size_t restart, const CcpMatrix& intensity, const EmorBasis& basis,
                      const BoldParams& bold, const OptimParams& opt) {
  const std::size_t k = basis.k();
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> init(-1.0, 1.0);

  std::vector<double> scale(k, 1.0);
  if (!basis.scales.empty()) scale = basis.scales;

  // theta = scale * u; the descent state is u.
  std::vector<double> u(k);
  for (double& v : u) v = init(rng);
  EmorCoefficients theta{std::vector<double>(k)};
  auto sync = [&] {
    for (std::size_t e = 0; e < k; ++e) theta.theta[e] = scale[e] * u[e];
  };
  sync();

  auto cost_at = [&](const EmorCoefficients& th) {
    return optimisation_cost(th, basis, intensity, bold, opt).cost;
  };

  RunResult run;
  double cost = cost_at(theta);
  run.trace.initial_cost = cost;
  run.best_cost = cost;
  run.best_theta = theta.theta;

  // Adam with the epsilon-hat placement used by TensorFlow.
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-7;
  std::vector<double> m1(k, 0.0);
  std::vector<double> m2(k, 0.0);
  std::vector<double> grad(k, 0.0);

  int epoch = 0;
  for (; epoch < opt.max_epochs; ++epoch) {
    for (std::size_t e = 0; e < k; ++e) {
      EmorCoefficients probe = theta;
      probe.theta[e] = scale[e] * (u[e] + opt.fd_step);
      const double up = cost_at(probe);
      probe.theta[e] = scale[e] * (u[e] - opt.fd_step);
      const double down = cost_at(probe);
      grad[e] = (up - down) / (2.0 * opt.fd_step);
      if (!std::isfinite(grad[e])) grad[e] = 0.0;
    }

    const double t = static_cast<double>(epoch + 1);
    const double lr = opt.lr0 * std::pow(opt.decay_rate, static_cast<double>(epoch) /
                                                             static_cast<double>(opt.decay_steps));
    const double lr_t = lr * std::sqrt(1.0 - std::pow(beta2, t)) / (1.0 - std::pow(beta1, t));
    for (std::size_t e = 0; e < k; ++e) {
      m1[e] = beta1 * m1[e] + (1.0 - beta1) * grad[e];
      m2[e] = beta2 * m2[e] + (1.0 - beta2) * grad[e] * grad[e];
      u[e] -= lr_t * m1[e] / (std::sqrt(m2[e]) + eps);
    }
    sync();

    const double next = cost_at(theta);
    if (next < run.best_cost) {
      run.best_cost = next;
      run.best_theta = theta.theta;
    }
    const bool converged = std::isfinite(next) && std::isfinite(cost) && std::abs(next - cost) < opt.tol;
    cost = next;
    if (converged) {
      ++epoch;
      break;
    }
  }
  run.trace.epochs = epoch;
  run.trace.final_cost = run.best_cost;
  run.trace.theta = run.best_theta;
  return run;
}

}  // namespace

CalibrationResult optimise_icrf(const CcpMatrix& intensity, const EmorBasis& full_basis,
                                const BoldParams& bold, const OptimParams& opt,
                                std::size_t workers) {
  if (full_basis.kind != EmorKind::inverse) {
    throw Error(ErrorKind::configuration, "optimisation needs an inverse-response basis");
  }
  full_basis.validate();
  opt.validate();
  bold.validate();
  require_shape(intensity);
  require_spread(sort_columns(intensity));
  const EmorBasis basis = full_basis.k() == opt.k ? full_basis : full_basis.truncated(opt.k);

  std::vector<RunResult> runs(static_cast<std::size_t>(opt.restarts));
  parallel_for(runs.size(), workers, [&](std::size_t r) {
    runs[r] = run_restart(r, intensity, basis, bold, opt);
  });

  std::size_t best = runs.size();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (std::isfinite(runs[r].best_cost) &&
        (best == runs.size() || runs[r].best_cost < runs[best].best_cost)) {
      best = r;
    }
  }
  if (best == runs.size()) {
    throw Error(ErrorKind::optimisation_failed, "every restart ended with a non-finite cost");
  }

  const EmorCoefficients theta{runs[best].best_theta};
  CalibrationResult result;
  result.icrf = repair_monotone("emor", emor_reconstruct(basis, theta));
  result.method = CalibrationMethod::optimisation;
  result.theta = theta.theta;
  result.name = "emor";
  result.seed = opt.seed;
  result.score = runs[best].best_cost;
  try {
    result.diagnostics = evaluate_candidate(intensity, result.icrf, bold);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_row) throw;
  }
  result.restarts.reserve(runs.size());
  for (auto& run : runs) result.restarts.push_back(std::move(run.trace));
  return result;
}

EmorBasis with_database_scales(EmorBasis basis, const DorfDatabase& dorf) {
  basis.validate();
  if (dorf.empty()) throw Error(ErrorKind::configuration, "DoRF database is empty");
  std::vector<double> sum(basis.k(), 0.0);
  for (std::size_t i = 0; i < dorf.size(); ++i) {
    const ResponseCurve& c = basis.kind == EmorKind::inverse ? dorf.inverse(i) : dorf.curve(i);
    if (c.size() != basis.samples()) {
      throw Error(ErrorKind::dimension, "database and basis sample counts differ");
    }
    const EmorCoefficients t = emor_project(basis, c.samples());
    for (std::size_t e = 0; e < basis.k(); ++e) sum[e] += t.theta[e] * t.theta[e];
  }
  basis.scales.resize(basis.k());
  for (std::size_t e = 0; e < basis.k(); ++e) {
    basis.scales[e] = std::max(1e-6, std::sqrt(sum[e] / static_cast<double>(dorf.size())));
  }
  return basis;
}

std::string calibration_to_json(const CalibrationResult& result) {
  nlohmann::json j;
  j["method"] = std::string(to_string(result.method));
  if (result.method == CalibrationMethod::selection) {
    j["name"] = result.name;
    j["index"] = result.index;
  } else {
    j["name"] = result.name;
    j["theta"] = result.theta;
  }
  j["score"] = result.score;
  j["seed"] = result.seed;
  j["bold"] = {{"value", result.diagnostics.bold},
               {"eta", result.diagnostics.eta},
               {"phi", result.diagnostics.phi},
               {"mu", result.diagnostics.mu}};
  j["samples"] = std::vector<double>(result.icrf.samples().begin(), result.icrf.samples().end());
  return j.dump(2);
}

ResponseCurve icrf_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("curve file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("samples") || !j["samples"].is_array()) {
    throw Error(ErrorKind::parse, "curve file has no \"samples\" array");
  }
  std::vector<double> samples;
  try {
    samples = j["samples"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::parse, "curve samples must be numbers");
  }
  const std::string name = j.value("name", std::string("icrf"));
  return ResponseCurve(name, std::move(samples));
}

}  // namespace rcc
