#pragma once

#include <cmath>
#include <cstdint>

#include "xaibench/datasets/types.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::datasets {

// Number of training rows for n instances: ceil(ratio * n).
inline std::size_t train_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-12));
}

// Seeded random partition; train receives ceil(ratio * n) rows. Row i of the
// inputs becomes instance id i.
inline DatasetSplit split(const Matrix& X, const std::vector<int>& y, double ratio,
                          std::uint64_t seed, Schema schema = {}) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (static_cast<std::size_t>(y.size()) != n) throw DimensionError("split: X/y row mismatch");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split: ratio must be in (0, 1)");
  if (n < 2) throw ConfigError("split: need at least 2 rows");
  const std::size_t n_train = train_count(n, ratio);
  if (n_train == 0 || n_train >= n) {
    throw ConfigError("split: ratio leaves one side empty for n = " + std::to_string(n));
  }
  if (schema.empty()) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) schema.push_back({"f" + std::to_string(j)});
  }

  Rng rng(seed);
  const auto perm = permutation(n, rng);

  DatasetSplit out;
  out.schema = std::move(schema);
  out.train_X.resize(static_cast<Eigen::Index>(n_train), X.cols());
  out.test_X.resize(static_cast<Eigen::Index>(n - n_train), X.cols());
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t id = perm[r];
    if (r < n_train) {
      out.train_X.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(id));
      out.train_y.push_back(y[id]);
      out.train_ids.push_back(id);
    } else {
      out.test_X.row(static_cast<Eigen::Index>(r - n_train)) = X.row(static_cast<Eigen::Index>(id));
      out.test_y.push_back(y[id]);
      out.test_ids.push_back(id);
    }
  }
  out.validate();
  return out;
}

}  // namespace xaibench::datasets
