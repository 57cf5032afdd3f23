#pragma once

// Straight-line reimplementation of the BoLD feature, written from the
// definition without reusing any library helper.

#include <algorithm>
#include <cmath>
#include <vector>

namespace rcc::testing {

struct OracleBold {
  double bold, eta, phi, mu;
  std::vector<double> dbar;
};

inline double oracle_interp(const std::vector<double>& c, double x) {
  const double pos = x * static_cast<double>(c.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i >= c.size() - 1) return c.back();
  const double t = pos - static_cast<double>(i);
  return c[i] * (1.0 - t) + c[i + 1] * t;
}

inline OracleBold oracle_bold(std::vector<std::vector<double>> w, const std::vector<double>& icrf,
                              double lambda1, double lambda2, int samples, bool normalise) {
  const std::size_t m = w.size();
  const std::size_t n = w[0].size();

  // Column order by mean, ties keep original order.
  std::vector<double> mean(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) mean[j] += w[i][j];
    mean[j] /= static_cast<double>(m);
  }
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t at = 0;
    while (at < order.size() && mean[order[at]] <= mean[j]) ++at;
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(at), j);
  }

  std::vector<std::vector<double>> lin(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) lin[i][j] = oracle_interp(icrf, w[i][order[j]]);

  double t0 = 0.0, t1 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    t0 += lin[i][0];
    t1 += lin[i][n - 1];
  }
  t0 /= static_cast<double>(m);
  t1 /= static_cast<double>(m);
  for (auto& row : lin) {
    const double a = (t1 - t0) / (row[n - 1] - row[0]);
    const double b = t0 - a * row[0];
    for (double& v : row) v = a * v + b;
    row[0] = t0;
    row[n - 1] = t1;
  }

  std::vector<double> wbar(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) wbar[j] += lin[i][j];
    wbar[j] /= static_cast<double>(m);
  }
  const double scale = normalise ? 1.0 / std::abs(wbar[n - 1] - wbar[0]) : 1.0;
  std::vector<double> dbar(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) dbar[j] += std::abs(lin[i][j] - wbar[j]) * scale;
    dbar[j] /= static_cast<double>(m);
  }

  std::vector<double> x(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) x[static_cast<std::size_t>(k)] = oracle_interp(dbar, k / double(samples - 1));
  double xm = 0.0;
  for (double v : x) xm += v;
  xm /= samples;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    m2 += (v - xm) * (v - xm) / samples;
    m3 += (v - xm) * (v - xm) * (v - xm) / samples;
  }
  const double eta = m2 < 1e-12 ? 0.0 : m3 / std::pow(m2, 1.5);
  const double phi = *std::max_element(dbar.begin(), dbar.end()) +
                     *std::min_element(dbar.begin(), dbar.end()) - 1.0;
  double mu = 0.0;
  for (double v : dbar) mu += v;
  const double bold = std::sqrt((eta - lambda1 * phi) * (eta - lambda1 * phi) + lambda2 * lambda2 * mu * mu);
  return {bold, eta, phi, mu, dbar};
}

}  // namespace rcc::testing
