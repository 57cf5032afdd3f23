#pragma once

// Small seeded generators shared by the tests. Kept deliberately dumb so the
// oracles built on them stay independent of the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rcc/color.hpp"

namespace rcc::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rgb rgb(double lo = 0.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  std::vector<std::vector<double>> matrix(std::size_t rows, std::size_t cols, double lo = 0.02,
                                          double hi = 0.98) {
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (auto& row : m)
      for (double& v : row) v = uniform(lo, hi);
    return m;
  }

  // Random strictly increasing curve with endpoints 0 and 1.
  std::vector<double> monotone_curve(std::size_t samples) {
    std::vector<double> steps(samples - 1);
    double total = 0.0;
    for (double& s : steps) total += (s = uniform(0.1, 1.0));
    std::vector<double> c(samples, 0.0);
    for (std::size_t i = 1; i < samples; ++i) c[i] = c[i - 1] + steps[i - 1] / total;
    c.back() = 1.0;
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<double> gamma_curve(double gamma, std::size_t samples) {
  std::vector<double> c(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    c[i] = std::pow(static_cast<double>(i) / static_cast<double>(samples - 1), gamma);
  }
  return c;
}

}  // namespace rcc::testing
