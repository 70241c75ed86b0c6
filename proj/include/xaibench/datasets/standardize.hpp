#pragma once

#include <cmath>

#include "xaibench/datasets/types.hpp"

namespace xaibench::datasets {

// Fits z-scoring on the training continuous columns (population std) and
// applies it to both sides. Binary columns are left untouched. A zero-variance
// column keeps std = 1 and emits a warning.
inline Scaler fit_scaler(const DatasetSplit& split) {
  const auto n = split.train_X.rows();
  const auto d = split.train_X.cols();
  Scaler s;
  s.mean.assign(static_cast<std::size_t>(d), 0.0);
  s.stddev.assign(static_cast<std::size_t>(d), 1.0);
  if (n == 0) return s;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (split.schema[static_cast<std::size_t>(j)].kind != FeatureKind::continuous) continue;
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = split.train_X(i, j);
    const double m = mean(col);
    std::vector<double> sq(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) sq[i] = (col[i] - m) * (col[i] - m);
    const double sd = std::sqrt(pairwise_sum(sq) / static_cast<double>(n));
    s.mean[static_cast<std::size_t>(j)] = m;
    if (sd > 0.0 && std::isfinite(sd)) {
      s.stddev[static_cast<std::size_t>(j)] = sd;
    } else {
      warn("column '" + split.schema[static_cast<std::size_t>(j)].name +
           "' has zero variance on train; std clamped to 1");
    }
  }
  return s;
}

inline DatasetSplit standardize(const DatasetSplit& split) {
  if (split.scaler) throw ConfigError("standardize: split is already standardized");
  DatasetSplit out = split;
  Scaler s = fit_scaler(split);
  out.train_X = s.transform(split.train_X);
  out.test_X = s.transform(split.test_X);
  out.scaler = std::move(s);
  return out;
}

}  // namespace xaibench::datasets
