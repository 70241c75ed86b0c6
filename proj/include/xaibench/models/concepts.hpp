#pragma once

#include <concepts>

#include "xaibench/numeric.hpp"

namespace xaibench::models {

// Anything that maps an input to per-class outputs and can differentiate one
// output with respect to the input. Explainers and metrics are written
// against this concept.
template <class M>
concept Classifier = requires(const M& m, const Vector& x, int c) {
  { m.n_features() } -> std::convertible_to<Eigen::Index>;
  { m.n_classes() } -> std::convertible_to<Eigen::Index>;
  { m.predict_proba(x) } -> std::convertible_to<Vector>;
  { m.input_gradient(x, c) } -> std::convertible_to<Vector>;
};

template <class M>
concept RepresentingClassifier = Classifier<M> && requires(const M& m, const Vector& x) {
  { m.representation(x) } -> std::convertible_to<Vector>;
};

template <class M>
concept BatchClassifier = Classifier<M> && requires(const M& m, const Matrix& X, int c) {
  { m.predict_proba_batch(X) } -> std::convertible_to<Matrix>;
  { m.input_gradient_batch(X, c) } -> std::convertible_to<Matrix>;
};

template <Classifier M>
int predicted_class(const M& m, const Vector& x) {
  return argmax(m.predict_proba(x));
}

// n x C outputs for the rows of X.
template <Classifier M>
Matrix predict_rows(const M& m, const Matrix& X) {
  if constexpr (BatchClassifier<M>) {
    return m.predict_proba_batch(X);
  } else {
    Matrix out(X.rows(), m.n_classes());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = m.predict_proba(Vector(X.row(i).transpose())).transpose();
    return out;
  }
}

// n x d gradients of output `c` at the rows of X.
template <Classifier M>
Matrix gradient_rows(const M& m, const Matrix& X, int c) {
  if constexpr (BatchClassifier<M>) {
    return m.input_gradient_batch(X, c);
  } else {
    Matrix out(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = m.input_gradient(Vector(X.row(i).transpose()), c).transpose();
    return out;
  }
}

}  // namespace xaibench::models
