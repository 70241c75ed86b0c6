#pragma once

// Relative stability of an explanation over a same-prediction neighborhood.
//
//   ratio(x') = || (e_x - e_x') / e_x ||_p / max(|| (D_x - D_x') / D_x ||_p, eps_min)
//
// with D the input (RIS), the model representation (RRS) or the output
// probabilities (ROS). The reported value is ln(max(max_x' ratio, eps_num)).
// Elementwise denominators with |v| < eps_num are replaced by a
// sign-preserving eps_num.

#include <cmath>
#include <cstdint>
#include <vector>

#include "xaibench/metrics/perturb.hpp"
#include "xaibench/models/concepts.hpp"

namespace xaibench::metrics {

enum class StabilityMode { input, representation, output };

struct StabilityConfig {
  double p = 2.0;
  double eps_min = 1e-6;
  double eps_num = 1e-12;
  int n_neighbors = 100;

  void validate() const {
    if (!(p >= 1.0)) throw ConfigError("stability: p must be >= 1");
    if (!(eps_min > 0.0) || !(eps_num > 0.0)) throw ConfigError("stability: eps values must be > 0");
    if (n_neighbors < 1) throw ConfigError("stability: n_neighbors must be >= 1");
  }
};

inline double lp_norm(const Vector& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 2.0) return v.norm();
  return std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

inline double guard_denominator(double v, double eps) {
  if (std::abs(v) >= eps) return v;
  return v < 0.0 ? -eps : eps;
}

// (reference - other) / reference, elementwise with guarded denominators.
inline Vector percent_change(const Vector& reference, const Vector& other, double eps) {
  if (reference.size() != other.size()) throw DimensionError("percent_change: length mismatch");
  Vector out(reference.size());
  for (Eigen::Index j = 0; j < reference.size(); ++j) {
    out[j] = (reference[j] - other[j]) / guard_denominator(reference[j], eps);
  }
  return out;
}

inline double stability_ratio(const Vector& e_x, const Vector& e_xp, const Vector& d_x, const Vector& d_xp,
                              const StabilityConfig& cfg) {
  const double num = lp_norm(percent_change(e_x, e_xp, cfg.eps_num), cfg.p);
  const double den = lp_norm(percent_change(d_x, d_xp, cfg.eps_num), cfg.p);
  return num / std::max(den, cfg.eps_min);
}

inline double log_stability(double max_ratio, const StabilityConfig& cfg) {
  return std::log(std::max(max_ratio, cfg.eps_num));
}

// Neighborhood of x: every feature perturbed, one row per neighbor.
inline Matrix sample_neighbors(const Vector& x, const datasets::Schema& schema, const PerturbationConfig& pcfg,
                               int n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "neighbors"));
  const std::vector<bool> all(static_cast<std::size_t>(x.size()), true);
  Matrix out(n, x.size());
  for (int i = 0; i < n; ++i) out.row(i) = perturb_instance(x, all, schema, pcfg, rng).transpose();
  return out;
}

struct StabilityScores {
  double ris = kNaN;
  double rrs = kNaN;
  double ros = kNaN;
  int survivors = 0;  // neighbors with the same predicted class

  double get(StabilityMode m) const {
    return m == StabilityMode::input ? ris : m == StabilityMode::representation ? rrs : ros;
  }
};

// All three stability scores from one neighborhood. `explain(x', j)` returns
// the explanation of neighbor j. With no surviving neighbor every score is
// NaN (undefined).
template <models::RepresentingClassifier M, class ExplainFn>
StabilityScores relative_stability_all(const M& model, const Vector& x, const Vector& e_x, ExplainFn&& explain,
                                       const datasets::Schema& schema, const StabilityConfig& scfg,
                                       const PerturbationConfig& pcfg, std::uint64_t seed) {
  require_size(x, model.n_features(), "relative_stability");
  require_size(e_x, x.size(), "relative_stability explanation");
  const Matrix neighbors = sample_neighbors(x, schema, pcfg, scfg.n_neighbors, seed);
  const Vector p_x = model.predict_proba(x);
  const int cls = argmax(p_x);
  const Vector r_x = model.representation(x);

  StabilityScores out;
  double best_in = -1.0, best_rep = -1.0, best_out = -1.0;
  for (Eigen::Index j = 0; j < neighbors.rows(); ++j) {
    const Vector xp = neighbors.row(j).transpose();
    const Vector p_xp = model.predict_proba(xp);
    if (argmax(p_xp) != cls) continue;
    ++out.survivors;
    const Vector e_xp = explain(xp, static_cast<std::size_t>(j));
    require_size(e_xp, x.size(), "relative_stability neighbor explanation");
    best_in = std::max(best_in, stability_ratio(e_x, e_xp, x, xp, scfg));
    best_rep = std::max(best_rep, stability_ratio(e_x, e_xp, r_x, model.representation(xp), scfg));
    best_out = std::max(best_out, stability_ratio(e_x, e_xp, p_x, p_xp, scfg));
  }
  if (out.survivors > 0) {
    out.ris = log_stability(best_in, scfg);
    out.rrs = log_stability(best_rep, scfg);
    out.ros = log_stability(best_out, scfg);
  }
  return out;
}

template <models::RepresentingClassifier M, class ExplainFn>
double relative_stability(const M& model, const Vector& x, const Vector& e_x, ExplainFn&& explain, StabilityMode mode,
                          const datasets::Schema& schema, const StabilityConfig& scfg,
                          const PerturbationConfig& pcfg, std::uint64_t seed) {
  return relative_stability_all(model, x, e_x, std::forward<ExplainFn>(explain), schema, scfg, pcfg, seed).get(mode);
}

}  // namespace xaibench::metrics
