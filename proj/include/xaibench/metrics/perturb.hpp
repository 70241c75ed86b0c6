#pragma once

#include <cstdint>
#include <vector>

#include "xaibench/datasets/types.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::metrics {

struct PerturbationConfig {
  double mean = 0.0;
  double std = 0.05;
  double flip_percentage = 0.03;
  int n_perturbations = 100;

  void validate() const {
    if (!(std > 0.0)) throw ConfigError("perturbation std must be > 0");
    if (!(flip_percentage >= 0.0 && flip_percentage <= 1.0)) throw ConfigError("flip_percentage must be in [0, 1]");
    if (n_perturbations < 1) throw ConfigError("n_perturbations must be >= 1");
  }
};

inline bool is_binary(const datasets::Schema& schema, Eigen::Index j) {
  return !schema.empty() && schema[static_cast<std::size_t>(j)].kind == datasets::FeatureKind::binary;
}

// Features with perturb[j] set get Gaussian noise (continuous) or a flip with
// probability flip_percentage (binary); the rest are copied. An empty schema
// treats every feature as continuous. Draws happen only for perturbed
// features, in index order.
inline Vector perturb_instance(const Vector& x, const std::vector<bool>& perturb, const datasets::Schema& schema,
                               const PerturbationConfig& cfg, Rng& rng) {
  if (static_cast<Eigen::Index>(perturb.size()) != x.size()) throw DimensionError("perturb_instance: mask length");
  if (!schema.empty() && static_cast<Eigen::Index>(schema.size()) != x.size()) {
    throw DimensionError("perturb_instance: schema length");
  }
  Vector out = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!perturb[static_cast<std::size_t>(j)]) continue;
    if (is_binary(schema, j)) {
      if (rng.bernoulli(cfg.flip_percentage)) out[j] = 1.0 - x[j];
    } else {
      out[j] = x[j] + rng.normal(cfg.mean, cfg.std);
    }
  }
  return out;
}

}  // namespace xaibench::metrics
