#pragma once

#include <cmath>
#include <cstdint>

#include "xaibench/explainers/config.hpp"
#include "xaibench/models/concepts.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::explainers {

// Weighted ridge regression y ~ a + b.z with the intercept unpenalized.
// Returns b. Rows of Z are samples.
inline Vector weighted_linear_fit(const Matrix& Z, const Vector& y, const Vector& w, double ridge) {
  const double wsum = w.sum();
  if (!(wsum > 0.0)) throw Error("weighted_linear_fit: sample weights sum to zero");
  const Eigen::RowVectorXd zbar = (w.transpose() * Z) / wsum;
  const double ybar = w.dot(y) / wsum;
  Matrix Zc = Z.rowwise() - zbar;
  Vector yc = y.array() - ybar;
  const Vector sw = w.cwiseSqrt();
  Zc.array().colwise() *= sw.array();
  yc.array() *= sw.array();
  Eigen::MatrixXd A = Zc.transpose() * Zc;
  A.diagonal().array() += ridge;
  const Vector b = Zc.transpose() * yc;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw Error("weighted_linear_fit: normal equations are singular");
  return ldlt.solve(b);
}

// Local surrogate: Gaussian samples around x, exponential kernel on the
// Euclidean distance, weighted least squares onto the predicted-class output.
template <models::Classifier M>
Vector lime(const M& model, const Vector& x, const LimeConfig& cfg, std::uint64_t seed) {
  require_size(x, model.n_features(), "lime");
  if (cfg.n_samples < 1) throw ConfigError("lime: n_samples must be >= 1");
  const int cls = models::predicted_class(model, x);
  const Eigen::Index d = x.size();
  Rng rng(seed);
  Matrix Z(cfg.n_samples, d);
  for (Eigen::Index i = 0; i < Z.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) Z(i, j) = x[j] + cfg.sample_std * rng.normal();
  const Vector y = models::predict_rows(model, Z).col(cls);
  Vector w(Z.rows());
  const double width2 = cfg.kernel_width * cfg.kernel_width;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) w[i] = std::exp(-(Z.row(i).transpose() - x).squaredNorm() / width2);
  return weighted_linear_fit(Z, y, w, cfg.ridge);
}

}  // namespace xaibench::explainers
