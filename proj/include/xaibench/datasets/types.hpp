#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/error.hpp"
#include "xaibench/numeric.hpp"

namespace xaibench::datasets {

enum class FeatureKind { continuous, binary };

inline std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::continuous ? "continuous" : "binary";
}

inline FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "continuous") return FeatureKind::continuous;
  if (s == "binary" || s == "discrete" || s == "discrete-binary") return FeatureKind::binary;
  throw ConfigError("unknown feature kind '" + std::string(s) + "'");
}

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  bool is_protected = false;
};

using Schema = std::vector<FeatureSchema>;

inline std::optional<std::size_t> protected_index(const Schema& schema) {
  std::optional<std::size_t> found;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!schema[j].is_protected) continue;
    if (found) throw ConfigError("schema marks more than one protected feature");
    found = j;
  }
  return found;
}

// Per-feature affine transform fitted on training data. Binary features carry
// the identity transform (mean 0, std 1).
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  Vector transform(const Vector& x) const {
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stddev[j];
    return out;
  }

  Vector inverse(const Vector& z) const {
    Vector out(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) out[j] = z[j] * stddev[j] + mean[j];
    return out;
  }

  Matrix transform(const Matrix& X) const {
    Matrix out(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = transform(Vector(X.row(i).transpose())).transpose();
    return out;
  }

  Matrix inverse(const Matrix& Z) const {
    Matrix out(Z.rows(), Z.cols());
    for (Eigen::Index i = 0; i < Z.rows(); ++i) out.row(i) = inverse(Vector(Z.row(i).transpose())).transpose();
    return out;
  }
};

// Train/test partition. `train_ids` / `test_ids` are the stable instance ids
// (row positions in the unsplit data) so ground truth can follow each row.
struct DatasetSplit {
  std::string name;
  Matrix train_X;
  std::vector<int> train_y;
  Matrix test_X;
  std::vector<int> test_y;
  Schema schema;
  std::optional<Scaler> scaler;
  std::vector<std::size_t> train_ids;
  std::vector<std::size_t> test_ids;

  std::size_t dim() const { return schema.size(); }

  void validate() const {
    const auto d = static_cast<Eigen::Index>(schema.size());
    if (train_X.cols() != d || test_X.cols() != d) {
      throw DimensionError("dataset column count does not match schema length");
    }
    if (static_cast<std::size_t>(train_X.rows()) != train_y.size() ||
        static_cast<std::size_t>(test_X.rows()) != test_y.size()) {
      throw DimensionError("dataset label count does not match rows");
    }
    if (train_ids.size() != train_y.size() || test_ids.size() != test_y.size()) {
      throw DimensionError("dataset instance ids do not match rows");
    }
    for (int y : train_y)
      if (y != 0 && y != 1) throw ParseError("labels must be binary");
    for (int y : test_y)
      if (y != 0 && y != 1) throw ParseError("labels must be binary");
    (void)protected_index(schema);
  }
};

// Known explanation per instance, indexed by instance id.
struct GroundTruth {
  Matrix masks;    // K x d, entries in {0, 1}
  Matrix weights;  // K x d
  Matrix centers;  // K x d
  std::vector<int> cluster;  // per instance id
  Matrix importance;         // n x d, row i = masks[cluster[i]] .* weights[cluster[i]]

  Vector for_instance(std::size_t id) const { return importance.row(static_cast<Eigen::Index>(id)).transpose(); }
};

}  // namespace xaibench::datasets
