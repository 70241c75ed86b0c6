#pragma once

#include "xaibench/models/concepts.hpp"
#include "xaibench/models/metadata.hpp"

namespace xaibench::models {

// Two ReLU hidden layers followed by a softmax output.
struct MlpModel {
  static constexpr Eigen::Index kDefaultHidden = 100;

  Matrix w1;  // H1 x d
  Vector b1;
  Matrix w2;  // H2 x H1
  Vector b2;
  Matrix w3;  // C x H2
  Vector b3;
  TrainMetadata meta;

  MlpModel() = default;
  MlpModel(Eigen::Index n_features, Eigen::Index n_classes, Eigen::Index hidden1 = kDefaultHidden,
           Eigen::Index hidden2 = kDefaultHidden)
      : w1(Matrix::Zero(hidden1, n_features)),
        b1(Vector::Zero(hidden1)),
        w2(Matrix::Zero(hidden2, hidden1)),
        b2(Vector::Zero(hidden2)),
        w3(Matrix::Zero(n_classes, hidden2)),
        b3(Vector::Zero(n_classes)) {}

  Eigen::Index n_features() const { return w1.cols(); }
  Eigen::Index n_classes() const { return w3.rows(); }

  void validate() const {
    if (b1.size() != w1.rows() || w2.cols() != w1.rows() || b2.size() != w2.rows() || w3.cols() != w2.rows() ||
        b3.size() != w3.rows()) {
      throw DimensionError("MlpModel: inconsistent layer shapes");
    }
  }

  // Intermediate activations for a batch, one instance per row.
  struct Forward {
    Matrix h1, a1, h2, a2, proba;
  };

  Forward forward(const Matrix& X) const {
    if (X.cols() != n_features()) throw DimensionError("MlpModel: batch column mismatch");
    Forward f;
    f.h1 = X * w1.transpose();
    f.h1.rowwise() += b1.transpose();
    f.a1 = f.h1.cwiseMax(0.0);
    f.h2 = f.a1 * w2.transpose();
    f.h2.rowwise() += b2.transpose();
    f.a2 = f.h2.cwiseMax(0.0);
    Matrix z = f.a2 * w3.transpose();
    z.rowwise() += b3.transpose();
    f.proba = softmax_rows(z);
    return f;
  }

  // First hidden layer before the ReLU.
  Vector representation(const Vector& x) const {
    require_size(x, n_features(), "MlpModel");
    return w1 * x + b1;
  }

  Vector predict_proba(const Vector& x) const {
    require_size(x, n_features(), "MlpModel");
    return forward(x.transpose()).proba.row(0).transpose();
  }

  Matrix predict_proba_batch(const Matrix& X) const { return forward(X).proba; }

  Vector input_gradient(const Vector& x, int c) const {
    require_size(x, n_features(), "MlpModel");
    return input_gradient_batch(x.transpose(), c).row(0).transpose();
  }

  Matrix input_gradient_batch(const Matrix& X, int c) const {
    if (c < 0 || c >= n_classes()) throw DimensionError("class index out of range");
    const Forward f = forward(X);
    // d p_c / d z_k = p_c (delta_ck - p_k)
    Matrix dz = -f.proba;
    dz.col(c).array() += 1.0;
    dz.array().colwise() *= f.proba.col(c).array();
    Matrix g2 = (dz * w3).cwiseProduct((f.h2.array() > 0.0).cast<double>().matrix());
    Matrix g1 = (g2 * w2).cwiseProduct((f.h1.array() > 0.0).cast<double>().matrix());
    return g1 * w1;
  }
};

}  // namespace xaibench::models
