#pragma once

// Kernel SHAP: a Shapley-kernel-weighted linear fit over feature coalitions.
// A coalition keeps the features in S at x and moves the rest to the
// baseline. Empty and full coalitions carry a large weight, which pins the
// intercept to f(baseline) and the attribution sum to f(x) - f(baseline).

#include <cmath>
#include <cstdint>
#include <vector>

#include "xaibench/explainers/config.hpp"
#include "xaibench/models/concepts.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::explainers {

// (d - 1) / (C(d, s) s (d - s)) for 0 < s < d.
inline double shapley_kernel_weight(int d, int s) {
  if (s <= 0 || s >= d) throw ConfigError("shapley_kernel_weight: size must be in (0, d)");
  const double log_binom = std::lgamma(d + 1.0) - std::lgamma(s + 1.0) - std::lgamma(d - s + 1.0);
  return (d - 1.0) / (std::exp(log_binom) * s * (d - s));
}

namespace detail {

template <models::Classifier M>
Vector solve_coalitions(const M& model, const Vector& x, const Vector& baseline, int cls,
                        const std::vector<std::vector<char>>& coalitions, const std::vector<double>& weights) {
  const Eigen::Index d = x.size();
  const auto m = static_cast<Eigen::Index>(coalitions.size());
  Matrix inputs(m, d);
  Eigen::MatrixXd design(m, d + 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    design(r, 0) = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool on = coalitions[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] != 0;
      inputs(r, j) = on ? x[j] : baseline[j];
      design(r, j + 1) = on ? 1.0 : 0.0;
    }
  }
  Vector target = models::predict_rows(model, inputs).col(cls);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double sw = std::sqrt(weights[static_cast<std::size_t>(r)]);
    design.row(r) *= sw;
    target[r] *= sw;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Vector coef = cod.solve(target);
  return coef.tail(d);
}

inline std::vector<char> full_coalition(Eigen::Index d, bool on) {
  return std::vector<char>(static_cast<std::size_t>(d), on ? 1 : 0);
}

}  // namespace detail

inline constexpr int kMaxCoalitionRedraws = 100;

// Samples `subset_size` coalitions (each feature kept with probability 1/2,
// empty/full rejected) and weights each by the Shapley kernel.
template <models::Classifier M>
Vector kernel_shap(const M& model, const Vector& x, const Vector& baseline, const KernelShapConfig& cfg,
                   std::uint64_t seed) {
  const Eigen::Index d = x.size();
  if (d == 0) throw ConfigError("kernel_shap: d must be >= 1");
  require_size(x, model.n_features(), "kernel_shap");
  require_size(baseline, d, "kernel_shap baseline");
  const int cls = models::predicted_class(model, x);

  std::vector<std::vector<char>> coalitions{detail::full_coalition(d, false), detail::full_coalition(d, true)};
  std::vector<double> weights{cfg.constraint_weight, cfg.constraint_weight};
  if (d >= 2) {
    Rng rng(seed);
    std::vector<std::vector<char>> sampled;
    for (int attempt = 0; attempt < kMaxCoalitionRedraws; ++attempt) {
      sampled.clear();
      while (static_cast<int>(sampled.size()) < cfg.subset_size) {
        std::vector<char> z(static_cast<std::size_t>(d));
        int size = 0;
        for (auto& b : z) {
          b = rng.bernoulli(0.5) ? 1 : 0;
          size += b;
        }
        if (size == 0 || size == d) continue;
        sampled.push_back(std::move(z));
      }
      bool all_same = true;
      for (const auto& z : sampled) all_same = all_same && z == sampled.front();
      if (!all_same || cfg.subset_size == 1) break;
    }
    for (auto& z : sampled) {
      int size = 0;
      for (char b : z) size += b;
      weights.push_back(shapley_kernel_weight(static_cast<int>(d), size));
      coalitions.push_back(std::move(z));
    }
  }
  return detail::solve_coalitions(model, x, baseline, cls, coalitions, weights);
}

// Every one of the 2^d coalitions; d is limited to keep the design small.
template <models::Classifier M>
Vector kernel_shap_exhaustive(const M& model, const Vector& x, const Vector& baseline,
                              double constraint_weight = 1e6) {
  const Eigen::Index d = x.size();
  if (d == 0 || d > 16) throw ConfigError("kernel_shap_exhaustive: need 1 <= d <= 16");
  require_size(x, model.n_features(), "kernel_shap_exhaustive");
  require_size(baseline, d, "kernel_shap_exhaustive baseline");
  const int cls = models::predicted_class(model, x);
  std::vector<std::vector<char>> coalitions;
  std::vector<double> weights;
  const std::uint64_t total = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<char> z(static_cast<std::size_t>(d));
    int size = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
      z[static_cast<std::size_t>(j)] = (mask >> j) & 1U;
      size += z[static_cast<std::size_t>(j)];
    }
    weights.push_back(size == 0 || size == d ? constraint_weight : shapley_kernel_weight(static_cast<int>(d), size));
    coalitions.push_back(std::move(z));
  }
  return detail::solve_coalitions(model, x, baseline, cls, coalitions, weights);
}

}  // namespace xaibench::explainers
