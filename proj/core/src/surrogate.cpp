#include "rcc/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "rcc/error.hpp"

namespace rcc {

namespace {

std::string label(const char* fmt, double a, double b = 0.0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

DorfDatabase surrogate_dorf(std::uint64_t seed, std::size_t count, std::size_t samples) {
  if (count == 0 || samples < 2) {
    throw Error(ErrorKind::configuration, "surrogate database needs curves and samples");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  std::vector<DorfRecord> records;
  records.reserve(count);
  records.push_back({ResponseCurve::identity(samples).renamed("linear"), "linear"});

  std::vector<double> x(samples);
  for (std::size_t i = 0; i < samples; ++i) x[i] = static_cast<double>(i) / static_cast<double>(samples - 1);

  while (records.size() < count) {
    const int family = std::uniform_int_distribution<int>(0, 4)(rng);
    std::vector<double> c(samples);
    std::string name;
    std::string type;
    switch (family) {
      case 0: {
        const double g = uniform(1.2, 3.2);
        for (std::size_t i = 0; i < samples; ++i) c[i] = std::pow(x[i], 1.0 / g);
        name = label("gamma%.3f", g);
        type = "gamma";
        break;
      }
      case 1: {
        const double k = std::exp(uniform(std::log(2.0), std::log(200.0)));
        for (std::size_t i = 0; i < samples; ++i) c[i] = std::log1p(k * x[i]) / std::log1p(k);
        name = label("log%.2f", k);
        type = "log";
        break;
      }
      case 2: {
        const double a = uniform(0.3, 0.9);
        const double b = uniform(-0.4, 0.4);
        for (std::size_t i = 0; i < samples; ++i) c[i] = std::pow(x[i], a + b * x[i]);
        name = label("ggcm%.2f_%.2f", a, b);
        type = "ggcm";
        break;
      }
      case 3: {
        const double g = uniform(1.0, 2.6);
        const double s = uniform(0.0, 0.6);
        for (std::size_t i = 0; i < samples; ++i) {
          const double base = std::pow(x[i], 1.0 / g);
          c[i] = (1.0 - s) * base + s * base * base * (3.0 - 2.0 * base);
        }
        name = label("film%.2f_%.2f", g, s);
        type = "film";
        break;
      }
      default: {
        const double k = uniform(1.5, 8.0);
        for (std::size_t i = 0; i < samples; ++i) {
          c[i] = (1.0 - std::exp(-k * x[i])) / (1.0 - std::exp(-k));
        }
        name = label("exp%.2f", k);
        type = "exp";
        break;
      }
    }
    records.push_back({repair_monotone(name, c), type});
  }
  return DorfDatabase(std::move(records));
}

EmorBasis pca_basis(const DorfDatabase& db, EmorKind kind, std::size_t k) {
  if (db.size() < 2) throw Error(ErrorKind::insufficient_data, "PCA needs at least 2 curves");
  const std::size_t s = db.curve(0).size();
  const auto rows = static_cast<Eigen::Index>(db.size());
  const auto cols = static_cast<Eigen::Index>(s);
  Eigen::MatrixXd data(rows, cols);
  for (std::size_t i = 0; i < db.size(); ++i) {
    const ResponseCurve& c = kind == EmorKind::forward ? db.curve(i) : db.inverse(i);
    if (c.size() != s) throw Error(ErrorKind::dimension, "database curves differ in sample count");
    for (std::size_t j = 0; j < s; ++j) data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c.samples()[j];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  data.rowwise() -= mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinV);
  const Eigen::MatrixXd& v = svd.matrixV();
  k = std::min<std::size_t>(k, static_cast<std::size_t>(v.cols()));

  EmorBasis basis;
  basis.kind = kind;
  basis.mean.assign(mean.data(), mean.data() + mean.size());
  for (std::size_t e = 0; e < k; ++e) {
    Eigen::VectorXd h = v.col(static_cast<Eigen::Index>(e));
    Eigen::Index at = 0;
    h.cwiseAbs().maxCoeff(&at);
    if (h(at) < 0.0) h = -h;
    basis.eigenvectors.emplace_back(h.data(), h.data() + h.size());
    basis.scales.push_back(svd.singularValues()(static_cast<Eigen::Index>(e)) /
                           std::sqrt(static_cast<double>(db.size())));
  }
  basis.validate();
  return basis;
}

}  // namespace rcc
