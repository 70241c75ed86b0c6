#pragma once

// Gaussian-cluster data with a known explanation per cluster.
//
// Each instance picks a cluster k uniformly, is drawn from N(mu_k, sigma * I)
// and receives the logit (m_k .* w_k) . x. Labels are 1 for logits strictly
// above the median logit, which balances the classes exactly for even n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include <json.hpp>

#include "xaibench/datasets/split.hpp"
#include "xaibench/datasets/types.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::datasets {

struct SynthConfig {
  std::size_t n_samples = 1000;
  std::size_t dim = 20;
  std::size_t n_clusters = 10;
  double distance_to_center = 6.0;
  double lower_weight = -1.0;
  double upper_weight = 1.0;
  double sparsity = 0.25;
  std::optional<double> sigma;  // covariance = sigma * I; identity when absent
  double test_size = 0.25;
  std::uint64_t seed = 564;

  void validate() const {
    if (n_clusters < 1) throw ConfigError("synthetic: n_clusters must be >= 1");
    if (dim < 1) throw ConfigError("synthetic: dim must be >= 1");
    if (n_samples < 2) throw ConfigError("synthetic: n_samples must be >= 2");
    if (!(lower_weight < upper_weight)) throw ConfigError("synthetic: need lower_weight < upper_weight");
    if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ConfigError("synthetic: sparsity must be in (0, 1]");
    if (!(test_size > 0.0 && test_size < 1.0)) throw ConfigError("synthetic: test_size must be in (0, 1)");
    if (!(distance_to_center > 0.0)) throw ConfigError("synthetic: distance_to_center must be > 0");
    if (sigma && !(*sigma > 0.0)) throw ConfigError("synthetic: sigma must be > 0");
  }
};

inline void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = nlohmann::json{{"n_samples", c.n_samples},
                     {"dim", c.dim},
                     {"n_clusters", c.n_clusters},
                     {"distance_to_center", c.distance_to_center},
                     {"lower_weight", c.lower_weight},
                     {"upper_weight", c.upper_weight},
                     {"sparsity", c.sparsity},
                     {"sigma", c.sigma ? nlohmann::json(*c.sigma) : nlohmann::json(nullptr)},
                     {"test_size", c.test_size},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, SynthConfig& c) {
  c = SynthConfig{};
  if (!j.is_object()) throw ConfigError("synthetic config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    const auto& v = it.value();
    if (k == "n_samples") c.n_samples = v.get<std::size_t>();
    else if (k == "dim") c.dim = v.get<std::size_t>();
    else if (k == "n_clusters") c.n_clusters = v.get<std::size_t>();
    else if (k == "distance_to_center") c.distance_to_center = v.get<double>();
    else if (k == "lower_weight") c.lower_weight = v.get<double>();
    else if (k == "upper_weight") c.upper_weight = v.get<double>();
    else if (k == "sparsity") c.sparsity = v.get<double>();
    else if (k == "sigma") c.sigma = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    else if (k == "test_size") c.test_size = v.get<double>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else throw ConfigError("synthetic config: unknown key '" + k + "'");
  }
}

// Center i (0-based) is (floor(i / d) + 1) * kappa along axis (i mod d).
inline Matrix place_cluster_centers(std::size_t n_clusters, std::size_t dim, double kappa) {
  if (n_clusters < 1 || dim < 1) throw ConfigError("place_cluster_centers: K and d must be >= 1");
  if (!(kappa > 0.0)) throw ConfigError("place_cluster_centers: kappa must be > 0");
  Matrix centers = Matrix::Zero(static_cast<Eigen::Index>(n_clusters), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n_clusters; ++i) {
    const double scale = static_cast<double>(i / dim + 1) * kappa;
    centers(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i % dim)) = scale;
  }
  return centers;
}

struct SyntheticDataset {
  DatasetSplit split;
  GroundTruth truth;
  Matrix X;            // unsplit, instance order
  std::vector<int> y;  // unsplit labels
  Vector logits;       // (m_k .* w_k) . x_i per instance
};

inline constexpr int kMaxMaskRedraws = 100;

inline SyntheticDataset generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.n_samples);
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  const auto K = static_cast<Eigen::Index>(cfg.n_clusters);

  SyntheticDataset out;
  GroundTruth& gt = out.truth;
  gt.centers = place_cluster_centers(cfg.n_clusters, cfg.dim, cfg.distance_to_center);
  gt.masks = Matrix::Zero(K, d);
  gt.weights = Matrix::Zero(K, d);

  Rng params(derive_seed(cfg.seed, "synthetic/params"));
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      gt.weights(k, j) = params.uniform(cfg.lower_weight, cfg.upper_weight);
    }
    bool nonzero = false;
    for (int attempt = 0; attempt < kMaxMaskRedraws && !nonzero; ++attempt) {
      for (Eigen::Index j = 0; j < d; ++j) {
        gt.masks(k, j) = params.bernoulli(cfg.sparsity) ? 1.0 : 0.0;
      }
      nonzero = gt.masks.row(k).sum() > 0.0;
    }
    if (!nonzero) {
      throw ConfigError("synthetic: cluster " + std::to_string(k) + " mask stayed all-zero after " +
                        std::to_string(kMaxMaskRedraws) + " draws; raise sparsity");
    }
  }
  const Matrix effective = gt.masks.cwiseProduct(gt.weights);

  const double stddev = cfg.sigma ? std::sqrt(*cfg.sigma) : 1.0;
  Rng samples(derive_seed(cfg.seed, "synthetic/samples"));
  out.X.resize(n, d);
  out.logits.resize(n);
  gt.cluster.resize(static_cast<std::size_t>(n));
  gt.importance.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(samples.below(cfg.n_clusters));
    gt.cluster[static_cast<std::size_t>(i)] = static_cast<int>(k);
    for (Eigen::Index j = 0; j < d; ++j) {
      out.X(i, j) = gt.centers(k, j) + stddev * samples.normal();
    }
    gt.importance.row(i) = effective.row(k);
    out.logits[i] = effective.row(k).dot(out.X.row(i));
  }

  // Thresholding the logit is equivalent to thresholding sigmoid(logit) but
  // immune to saturation ties at 1.0.
  std::vector<double> sorted(out.logits.data(), out.logits.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const auto mid = static_cast<std::size_t>(n / 2);
  const double median = (n % 2 == 0) ? 0.5 * (sorted[mid - 1] + sorted[mid]) : sorted[mid];
  out.y.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.y[static_cast<std::size_t>(i)] = out.logits[i] > median ? 1 : 0;

  Schema schema;
  for (Eigen::Index j = 0; j < d; ++j) schema.push_back({"x" + std::to_string(j), FeatureKind::continuous, false});
  out.split = split(out.X, out.y, 1.0 - cfg.test_size, derive_seed(cfg.seed, "synthetic/split"),
                    std::move(schema));
  out.split.name = "synthetic";
  return out;
}

}  // namespace xaibench::datasets
