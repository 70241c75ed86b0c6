#pragma once

// Prediction gaps: expected |f_c(x) - f_c(x')| where c is the class
// predicted at x and x' perturbs either the top-k features of an explanation
// (PGI) or all the others (PGU).

#include <cstdint>
#include <vector>

#include "xaibench/metrics/agreement.hpp"
#include "xaibench/metrics/perturb.hpp"
#include "xaibench/models/concepts.hpp"

namespace xaibench::metrics {

enum class GapMode { important, unimportant };

template <models::Classifier M>
double prediction_gap(const M& model, const Vector& x, const Vector& explanation, Eigen::Index k, GapMode mode,
                      const datasets::Schema& schema, const PerturbationConfig& cfg, std::uint64_t seed) {
  require_size(x, model.n_features(), "prediction_gap");
  require_size(explanation, x.size(), "prediction_gap explanation");
  if (k < 1 || k > x.size()) throw ConfigError("prediction_gap: need 1 <= k <= d");
  const Vector p = model.predict_proba(x);
  const int cls = argmax(p);
  const double y_hat = p[cls];

  std::vector<bool> perturb(static_cast<std::size_t>(x.size()), mode == GapMode::unimportant);
  for (Eigen::Index f : top_k(explanation, k)) perturb[static_cast<std::size_t>(f)] = mode == GapMode::important;
  bool any = false;
  for (bool b : perturb) any = any || b;
  if (!any) return 0.0;

  Rng rng(derive_seed(seed, mode == GapMode::important ? "pgi" : "pgu", static_cast<std::uint64_t>(k)));
  Matrix Xp(cfg.n_perturbations, x.size());
  for (int i = 0; i < cfg.n_perturbations; ++i) Xp.row(i) = perturb_instance(x, perturb, schema, cfg, rng).transpose();
  const Matrix P = models::predict_rows(model, Xp);
  std::vector<double> gaps(static_cast<std::size_t>(cfg.n_perturbations));
  for (int i = 0; i < cfg.n_perturbations; ++i) gaps[static_cast<std::size_t>(i)] = std::abs(y_hat - P(i, cls));
  return mean(gaps);
}

template <models::Classifier M>
std::vector<double> prediction_gap_curve(const M& model, const Vector& x, const Vector& explanation, GapMode mode,
                                         const datasets::Schema& schema, const PerturbationConfig& cfg,
                                         std::uint64_t seed) {
  std::vector<double> curve;
  for (Eigen::Index k = 1; k <= x.size(); ++k) {
    curve.push_back(prediction_gap(model, x, explanation, k, mode, schema, cfg, seed));
  }
  return curve;
}

// Reported value: area under the k = 1..d curve.
template <models::Classifier M>
double prediction_gap_auc(const M& model, const Vector& x, const Vector& explanation, GapMode mode,
                          const datasets::Schema& schema, const PerturbationConfig& cfg, std::uint64_t seed) {
  const auto curve = prediction_gap_curve(model, x, explanation, mode, schema, cfg, seed);
  return auc_over_k(curve);
}

}  // namespace xaibench::metrics
