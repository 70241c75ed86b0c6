#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xaibench/datasets/csv.hpp"
#include "xaibench/datasets/fetch.hpp"
#include "xaibench/datasets/manifest.hpp"
#include "xaibench/datasets/standardize.hpp"
#include "xaibench/datasets/synthetic.hpp"
#include "xaibench/harness/config.hpp"

namespace xaibench::harness {

struct PreparedData {
  datasets::DatasetSplit split;
  std::optional<datasets::GroundTruth> truth;
  std::optional<std::vector<int>> test_groups;  // protected group per test row
  std::string groups_note;                      // how groups were derived, or why absent
  bool standardized = false;
};

inline std::size_t feature_index(const datasets::Schema& schema, const std::string& name) {
  for (std::size_t j = 0; j < schema.size(); ++j)
    if (schema[j].name == name) return j;
  std::size_t idx = 0;
  const auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
  if (ec == std::errc() && p == name.data() + name.size() && idx < schema.size()) return idx;
  throw ConfigError("unknown feature '" + name + "'");
}

// Test rows in original units, so group rules see unscaled values.
inline Matrix raw_test_rows(const datasets::DatasetSplit& s) {
  return s.scaler ? s.scaler->inverse(s.test_X) : s.test_X;
}

inline void assign_groups(PreparedData& d, const BenchmarkConfig& cfg) {
  const auto& s = d.split;
  const Matrix raw = raw_test_rows(s);
  if (cfg.subgroup) {
    const auto j = static_cast<Eigen::Index>(feature_index(s.schema, cfg.subgroup->feature));
    std::vector<int> g(static_cast<std::size_t>(raw.rows()));
    for (Eigen::Index i = 0; i < raw.rows(); ++i) g[static_cast<std::size_t>(i)] = raw(i, j) > cfg.subgroup->threshold;
    d.test_groups = std::move(g);
    d.groups_note = s.schema[static_cast<std::size_t>(j)].name + " > " + std::to_string(cfg.subgroup->threshold);
    return;
  }
  if (auto p = datasets::protected_index(s.schema)) {
    const auto j = static_cast<Eigen::Index>(*p);
    std::vector<int> g(static_cast<std::size_t>(raw.rows()));
    for (Eigen::Index i = 0; i < raw.rows(); ++i) g[static_cast<std::size_t>(i)] = raw(i, j) > 0.5;
    d.test_groups = std::move(g);
    d.groups_note = "protected column " + s.schema[*p].name;
    return;
  }
  d.groups_note = "no protected attribute or subgroup rule configured";
}

inline PreparedData prepare_dataset(const BenchmarkConfig& cfg) {
  PreparedData d;
  const auto& spec = cfg.dataset;
  switch (spec.kind) {
    case DatasetSpec::Kind::synthetic: {
      auto ds = datasets::generate_synthetic(spec.synthetic);
      d.split = std::move(ds.split);
      d.truth = std::move(ds.truth);
      break;
    }
    case DatasetSpec::Kind::csv: {
      datasets::CsvOptions opt{spec.target, spec.protected_column, spec.kinds, spec.train_ratio,
                               derive_seed(cfg.seed, "split")};
      d.split = datasets::load_csv(spec.path, opt);
      break;
    }
    case DatasetSpec::Kind::manifest: {
      const auto entries = datasets::load_manifest(spec.path);
      const auto& entry = datasets::find_entry(entries, spec.name);
      const auto file = datasets::fetch_dataset(entry, spec.cache_dir);
      auto opt = entry.csv_options(spec.train_ratio, derive_seed(cfg.seed, "split"));
      if (spec.protected_column) opt.protected_column = spec.protected_column;
      for (const auto& [k, v] : spec.kinds) opt.kinds[k] = v;
      d.split = datasets::load_csv(file.string(), opt);
      d.split.name = entry.name;
      break;
    }
  }
  if (spec.effective_standardize()) {
    d.split = datasets::standardize(d.split);
    d.standardized = true;
  }
  d.split.validate();
  assign_groups(d, cfg);
  return d;
}

}  // namespace xaibench::harness
