#pragma once

#include "xaibench/models/concepts.hpp"
#include "xaibench/models/metadata.hpp"

namespace xaibench::models {

// Multinomial logistic regression with one logit per class:
// p = softmax(W x + b).
struct LinearModel {
  Matrix weights;  // C x d
  Vector bias;     // C
  TrainMetadata meta;

  LinearModel() = default;
  LinearModel(Eigen::Index n_features, Eigen::Index n_classes)
      : weights(Matrix::Zero(n_classes, n_features)), bias(Vector::Zero(n_classes)) {}

  Eigen::Index n_features() const { return weights.cols(); }
  Eigen::Index n_classes() const { return weights.rows(); }

  Vector representation(const Vector& x) const {
    require_size(x, n_features(), "LinearModel");
    return weights * x + bias;
  }

  Vector predict_proba(const Vector& x) const { return softmax(representation(x)); }

  // d p_c / d x = sum_{k != c} p_c p_k (w_c - w_k). Each term is a positive
  // scalar times a weight difference, which keeps magnitude order exact.
  Vector input_gradient(const Vector& x, int c) const {
    check_class(c);
    return gradient_from_proba(predict_proba(x), c);
  }

  Matrix predict_proba_batch(const Matrix& X) const {
    if (X.cols() != n_features()) throw DimensionError("LinearModel: batch column mismatch");
    Matrix logits = X * weights.transpose();
    logits.rowwise() += bias.transpose();
    return softmax_rows(logits);
  }

  Matrix input_gradient_batch(const Matrix& X, int c) const {
    check_class(c);
    const Matrix P = predict_proba_batch(X);
    Matrix out(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = gradient_from_proba(P.row(i).transpose(), c).transpose();
    return out;
  }

  // Coefficient ground truth for the two-class case: w_1 - w_0.
  Vector coefficient_difference() const {
    if (n_classes() != 2) throw DimensionError("coefficient_difference needs two classes");
    return (weights.row(1) - weights.row(0)).transpose();
  }

 private:
  void check_class(int c) const {
    if (c < 0 || c >= n_classes()) throw DimensionError("class index out of range");
  }

  Vector gradient_from_proba(const Vector& p, int c) const {
    Vector g = Vector::Zero(n_features());
    for (Eigen::Index k = 0; k < n_classes(); ++k) {
      if (k == c) continue;
      const Vector diff = (weights.row(c) - weights.row(k)).transpose();
      g += (p[c] * p[k]) * diff;
    }
    return g;
  }
};

}  // namespace xaibench::models
