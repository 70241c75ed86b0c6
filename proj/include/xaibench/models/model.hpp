#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "xaibench/models/linear.hpp"
#include "xaibench/models/mlp.hpp"

namespace xaibench::models {

enum class Family { logistic, mlp };

inline std::string_view to_string(Family f) { return f == Family::logistic ? "lr" : "ann"; }

inline Family parse_family(std::string_view s) {
  if (s == "lr" || s == "logistic") return Family::logistic;
  if (s == "ann" || s == "mlp") return Family::mlp;
  throw ConfigError("unknown model family '" + std::string(s) + "'");
}

// Type-erased handle over the two supported families; satisfies
// RepresentingClassifier and BatchClassifier.
class Model {
 public:
  Model(LinearModel m) : impl_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  Model(MlpModel m) : impl_(std::move(m)) {}     // NOLINT(google-explicit-constructor)

  Family family() const { return std::holds_alternative<LinearModel>(impl_) ? Family::logistic : Family::mlp; }

  Eigen::Index n_features() const {
    return std::visit([](const auto& m) { return m.n_features(); }, impl_);
  }
  Eigen::Index n_classes() const {
    return std::visit([](const auto& m) { return m.n_classes(); }, impl_);
  }
  Vector predict_proba(const Vector& x) const {
    return std::visit([&](const auto& m) { return m.predict_proba(x); }, impl_);
  }
  Vector input_gradient(const Vector& x, int c) const {
    return std::visit([&](const auto& m) { return m.input_gradient(x, c); }, impl_);
  }
  Vector representation(const Vector& x) const {
    return std::visit([&](const auto& m) { return m.representation(x); }, impl_);
  }
  Matrix predict_proba_batch(const Matrix& X) const {
    return std::visit([&](const auto& m) { return m.predict_proba_batch(X); }, impl_);
  }
  Matrix input_gradient_batch(const Matrix& X, int c) const {
    return std::visit([&](const auto& m) { return m.input_gradient_batch(X, c); }, impl_);
  }

  const TrainMetadata& meta() const {
    return std::visit([](const auto& m) -> const TrainMetadata& { return m.meta; }, impl_);
  }
  TrainMetadata& meta() {
    return std::visit([](auto& m) -> TrainMetadata& { return m.meta; }, impl_);
  }

  const LinearModel* as_linear() const { return std::get_if<LinearModel>(&impl_); }
  const MlpModel* as_mlp() const { return std::get_if<MlpModel>(&impl_); }

 private:
  std::variant<LinearModel, MlpModel> impl_;
};

static_assert(RepresentingClassifier<Model> && BatchClassifier<Model>);
static_assert(RepresentingClassifier<LinearModel> && BatchClassifier<LinearModel>);
static_assert(RepresentingClassifier<MlpModel> && BatchClassifier<MlpModel>);

template <Classifier M>
double accuracy(const M& m, const Matrix& X, const std::vector<int>& y) {
  if (X.rows() == 0) return kNaN;
  const Matrix P = predict_rows(m, X);
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::Index c;
    P.row(i).maxCoeff(&c);
    hits += static_cast<int>(c) == y[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(hits) / static_cast<double>(X.rows());
}

}  // namespace xaibench::models
