#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "xaibench/datasets/types.hpp"
#include "xaibench/models/linear.hpp"
#include "xaibench/models/mlp.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::models {

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 0.001;
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be > 0");
    if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  }
};

namespace detail {

// Adam moments for one parameter tensor.
template <class Tensor>
struct AdamSlot {
  Tensor m, v;
  explicit AdamSlot(const Tensor& like) : m(Tensor::Zero(like.rows(), like.cols())), v(m) {}

  void step(Tensor& param, const Tensor& grad, const TrainConfig& cfg, long t) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    param.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
  }
};

template <class Tensor>
void init_uniform(Tensor& t, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = rng.uniform(-bound, bound);
}

inline void check_trainable(const datasets::DatasetSplit& split) {
  if (split.train_X.rows() == 0) throw ConfigError("train: empty training set");
  bool has0 = false, has1 = false;
  for (int y : split.train_y) (y == 0 ? has0 : has1) = true;
  if (!(has0 && has1)) throw ConfigError("train: training data contains a single class");
}

inline Matrix one_hot_batch(const std::vector<int>& y, const std::vector<std::size_t>& idx, Eigen::Index classes) {
  Matrix Y = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), classes);
  for (std::size_t r = 0; r < idx.size(); ++r) Y(static_cast<Eigen::Index>(r), y[idx[r]]) = 1.0;
  return Y;
}

inline Matrix gather_rows(const Matrix& X, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(idx[r]));
  return out;
}

inline double cross_entropy_sum(const Matrix& P, const Matrix& Y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index c = 0; c < P.cols(); ++c)
      if (Y(i, c) > 0.0) s -= std::log(std::max(P(i, c), 1e-300));
  return s;
}

// Mini-batch driver: `step(batch_indices)` returns the summed batch loss.
template <class StepFn>
void run_epochs(std::size_t n, const TrainConfig& cfg, Rng& rng, std::vector<double>* loss_trace, StepFn&& step) {
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = permutation(n, rng);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
      total += step(batch);
    }
    if (loss_trace) loss_trace->push_back(total / static_cast<double>(n));
  }
}

}  // namespace detail

inline constexpr Eigen::Index kNumClasses = 2;

// Cross-entropy with mini-batch Adam. Weights start uniform in
// +-1/sqrt(fan_in). `loss_trace` receives the mean training loss per epoch.
inline LinearModel train_logistic(const datasets::DatasetSplit& split, const TrainConfig& cfg,
                                  std::vector<double>* loss_trace = nullptr) {
  cfg.validate();
  detail::check_trainable(split);
  const Eigen::Index d = split.train_X.cols();
  LinearModel model(d, kNumClasses);
  Rng rng(derive_seed(cfg.seed, "train/logistic"));
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  detail::init_uniform(model.weights, bound, rng);
  detail::init_uniform(model.bias, bound, rng);

  detail::AdamSlot<Matrix> sw(model.weights);
  detail::AdamSlot<Vector> sb(model.bias);
  long t = 0;
  detail::run_epochs(split.train_y.size(), cfg, rng, loss_trace, [&](const std::vector<std::size_t>& batch) {
    const Matrix X = detail::gather_rows(split.train_X, batch);
    const Matrix Y = detail::one_hot_batch(split.train_y, batch, kNumClasses);
    const Matrix P = model.predict_proba_batch(X);
    const double loss = detail::cross_entropy_sum(P, Y);
    const Matrix dz = (P - Y) / static_cast<double>(batch.size());
    const Matrix gw = dz.transpose() * X;
    const Vector gb = dz.colwise().sum().transpose();
    ++t;
    sw.step(model.weights, gw, cfg, t);
    sb.step(model.bias, gb, cfg, t);
    return loss;
  });
  model.meta = {split.name, cfg.seed, cfg.epochs, cfg.learning_rate, cfg.batch_size, std::nullopt};
  return model;
}

inline MlpModel train_mlp(const datasets::DatasetSplit& split, const TrainConfig& cfg,
                          std::vector<double>* loss_trace = nullptr,
                          Eigen::Index hidden = MlpModel::kDefaultHidden) {
  cfg.validate();
  detail::check_trainable(split);
  const Eigen::Index d = split.train_X.cols();
  MlpModel model(d, kNumClasses, hidden, hidden);
  Rng rng(derive_seed(cfg.seed, "train/mlp"));
  auto init_layer = [&](Matrix& w, Vector& b) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    detail::init_uniform(w, bound, rng);
    detail::init_uniform(b, bound, rng);
  };
  init_layer(model.w1, model.b1);
  init_layer(model.w2, model.b2);
  init_layer(model.w3, model.b3);

  detail::AdamSlot<Matrix> s_w1(model.w1), s_w2(model.w2), s_w3(model.w3);
  detail::AdamSlot<Vector> s_b1(model.b1), s_b2(model.b2), s_b3(model.b3);
  long t = 0;
  detail::run_epochs(split.train_y.size(), cfg, rng, loss_trace, [&](const std::vector<std::size_t>& batch) {
    const Matrix X = detail::gather_rows(split.train_X, batch);
    const Matrix Y = detail::one_hot_batch(split.train_y, batch, kNumClasses);
    const auto f = model.forward(X);
    const double loss = detail::cross_entropy_sum(f.proba, Y);
    const Matrix dz = (f.proba - Y) / static_cast<double>(batch.size());
    const Matrix g_w3 = dz.transpose() * f.a2;
    const Vector g_b3 = dz.colwise().sum().transpose();
    const Matrix dh2 = (dz * model.w3).cwiseProduct((f.h2.array() > 0.0).cast<double>().matrix());
    const Matrix g_w2 = dh2.transpose() * f.a1;
    const Vector g_b2 = dh2.colwise().sum().transpose();
    const Matrix dh1 = (dh2 * model.w2).cwiseProduct((f.h1.array() > 0.0).cast<double>().matrix());
    const Matrix g_w1 = dh1.transpose() * X;
    const Vector g_b1 = dh1.colwise().sum().transpose();
    ++t;
    s_w1.step(model.w1, g_w1, cfg, t);
    s_b1.step(model.b1, g_b1, cfg, t);
    s_w2.step(model.w2, g_w2, cfg, t);
    s_b2.step(model.b2, g_b2, cfg, t);
    s_w3.step(model.w3, g_w3, cfg, t);
    s_b3.step(model.b3, g_b3, cfg, t);
    return loss;
  });
  model.meta = {split.name, cfg.seed, cfg.epochs, cfg.learning_rate, cfg.batch_size, std::nullopt};
  return model;
}

}  // namespace xaibench::models
