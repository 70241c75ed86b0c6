#pragma once

#include <cstdint>

#include "xaibench/explainers/config.hpp"
#include "xaibench/models/concepts.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::explainers {

// Gradient of the predicted-class output at x.
template <models::Classifier M>
Vector vanilla_gradient(const M& model, const Vector& x, const GradConfig& cfg = {}) {
  require_size(x, model.n_features(), "vanilla_gradient");
  Vector g = model.input_gradient(x, models::predicted_class(model, x));
  if (cfg.absolute_value) g = g.cwiseAbs();
  return g;
}

template <models::Classifier M>
Vector gradient_x_input(const M& model, const Vector& x) {
  return vanilla_gradient(model, x).cwiseProduct(x);
}

// Mean gradient of the class predicted at x over x + N(0, std^2 I) samples.
template <models::Classifier M>
Vector smoothgrad(const M& model, const Vector& x, const SmoothGradConfig& cfg, std::uint64_t seed) {
  require_size(x, model.n_features(), "smoothgrad");
  if (cfg.n_samples < 1) throw ConfigError("smoothgrad: n_samples must be >= 1");
  const int cls = models::predicted_class(model, x);
  if (cfg.std == 0.0) return model.input_gradient(x, cls);
  Rng rng(seed);
  const Eigen::Index d = x.size();
  Matrix noisy(cfg.n_samples, d);
  for (Eigen::Index i = 0; i < noisy.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) noisy(i, j) = x[j] + cfg.std * rng.normal();
  const Matrix grads = models::gradient_rows(model, noisy, cls);
  Vector out(d);
  std::vector<double> col(static_cast<std::size_t>(grads.rows()));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < grads.rows(); ++i) col[static_cast<std::size_t>(i)] = grads(i, j);
    out[j] = mean(col);
  }
  return out;
}

// Gauss-Legendre average of the predicted-class gradient along the straight
// path baseline -> x. With multiply_by_inputs the average is scaled by
// (x - baseline), giving classic integrated gradients.
template <models::Classifier M>
Vector integrated_gradients(const M& model, const Vector& x, const Vector& baseline,
                            const IntegratedGradientsConfig& cfg) {
  require_size(x, model.n_features(), "integrated_gradients");
  require_size(baseline, x.size(), "integrated_gradients baseline");
  const int cls = models::predicted_class(model, x);
  const QuadratureRule rule = gauss_legendre(cfg.n_steps);
  Matrix path(cfg.n_steps, x.size());
  for (int s = 0; s < cfg.n_steps; ++s) {
    path.row(s) = (baseline + rule.nodes[static_cast<std::size_t>(s)] * (x - baseline)).transpose();
  }
  const Matrix grads = models::gradient_rows(model, path, cls);
  Vector avg = Vector::Zero(x.size());
  for (int s = 0; s < cfg.n_steps; ++s) avg += rule.weights[static_cast<std::size_t>(s)] * grads.row(s).transpose();
  if (cfg.multiply_by_inputs) avg = avg.cwiseProduct(x - baseline);
  return avg;
}

// I.i.d. Uniform(-1, 1) attributions.
inline Vector random_attribution(Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw ConfigError("random explainer: d must be >= 1");
  Rng rng(seed);
  Vector out(d);
  for (Eigen::Index j = 0; j < d; ++j) out[j] = rng.uniform(-1.0, 1.0);
  return out;
}

}  // namespace xaibench::explainers
