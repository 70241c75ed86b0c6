#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xaibench/datasets/synthetic.hpp"
#include "xaibench/explainers/explainer.hpp"
#include "xaibench/hash.hpp"
#include "xaibench/metrics/catalog.hpp"
#include "xaibench/metrics/perturb.hpp"
#include "xaibench/metrics/stability.hpp"
#include "xaibench/models/model.hpp"
#include "xaibench/models/train.hpp"

namespace xaibench::harness {

inline constexpr const char* kVersion = "0.1.0";

struct TopKConfig {
  double percentage_most_important = 0.25;
  std::optional<int> k;

  Eigen::Index resolve(Eigen::Index d) const {
    if (k) {
      if (*k < 1 || *k > d) throw ConfigError("topk: k must be in [1, d]");
      return *k;
    }
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(percentage_most_important * static_cast<double>(d))));
  }

  void validate() const {
    if (!(percentage_most_important > 0.0 && percentage_most_important <= 1.0)) {
      throw ConfigError("topk: percentage_most_important must be in (0, 1]");
    }
  }
};

struct DatasetSpec {
  enum class Kind { synthetic, csv, manifest };
  Kind kind = Kind::synthetic;
  datasets::SynthConfig synthetic;
  std::string path;  // csv file, or manifest file
  std::string target;
  std::optional<std::string> protected_column;
  std::map<std::string, datasets::FeatureKind> kinds;
  double train_ratio = 0.7;
  std::string name;       // manifest entry name
  std::string cache_dir;  // manifest cache
  std::optional<bool> standardize;

  // Synthetic data stays in its native scale; real tables are z-scored.
  bool effective_standardize() const { return standardize.value_or(kind != Kind::synthetic); }
};

struct ModelSpec {
  models::Family family = models::Family::logistic;
  std::optional<std::string> path;
};

// Derives the protected group of each instance as feature > threshold.
struct SubgroupRule {
  std::string feature;
  double threshold = 0.0;
};

struct BenchmarkConfig {
  DatasetSpec dataset;
  std::vector<ModelSpec> models{{models::Family::logistic, {}}, {models::Family::mlp, {}}};
  std::vector<explainers::Method> explainers{explainers::kAllMethods.begin(), explainers::kAllMethods.end()};
  explainers::ExplainerConfig explainer_params;
  std::vector<metrics::MetricId> metrics = metrics::all_metrics();
  TopKConfig topk;
  metrics::PerturbationConfig perturbation;
  metrics::StabilityConfig stability;
  std::optional<models::TrainConfig> train;  // seed defaults to the master seed
  std::optional<SubgroupRule> subgroup;
  std::optional<std::size_t> max_instances;
  std::uint64_t seed = 0;

  // Execution-only settings; they never change results.
  std::size_t workers = 1;
  std::string output_dir = "out";
  std::vector<std::string> formats{"markdown", "csv", "json"};

  models::TrainConfig train_config() const {
    if (train) return *train;
    models::TrainConfig t;
    t.seed = seed;
    return t;
  }

  void validate() const {
    if (explainers.empty()) throw ConfigError("config: explainer list is empty");
    if (metrics.empty()) throw ConfigError("config: metric list is empty");
    if (models.empty()) throw ConfigError("config: model list is empty");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    explainer_params.validate();
    topk.validate();
    perturbation.validate();
    stability.validate();
    train_config().validate();
    if (dataset.kind == DatasetSpec::Kind::synthetic) dataset.synthetic.validate();
    if (dataset.kind == DatasetSpec::Kind::csv || dataset.kind == DatasetSpec::Kind::manifest) {
      if (!std::filesystem::exists(dataset.path)) throw ConfigError("config: file not found: " + dataset.path);
    }
    if (dataset.kind == DatasetSpec::Kind::csv && dataset.target.empty()) {
      throw ConfigError("config: csv dataset needs a target column");
    }
    if (!(dataset.train_ratio > 0.0 && dataset.train_ratio < 1.0)) throw ConfigError("config: train_ratio in (0, 1)");
    for (const auto& m : models)
      if (m.path && !std::filesystem::exists(*m.path)) throw ConfigError("config: model file not found: " + *m.path);
    for (const auto& f : formats)
      if (f != "markdown" && f != "csv" && f != "json") throw ConfigError("config: unknown output format '" + f + "'");
  }
};

namespace detail {

inline std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

template <class T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace detail

// Parses a config document. Relative paths resolve against `base_dir`.
inline BenchmarkConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  BenchmarkConfig c;
  try {
    detail::check_keys(j,
                       {"dataset", "models", "explainers", "explainer_params", "metrics", "topk", "perturbation",
                        "stability", "train", "subgroup", "max_instances", "seed", "workers", "output_dir",
                        "formats"},
                       "config");
    if (j.contains("dataset")) {
      const auto& d = j["dataset"];
      const std::string type = d.value("type", std::string("synthetic"));
      if (type == "synthetic") {
        c.dataset.kind = DatasetSpec::Kind::synthetic;
        detail::check_keys(d, {"type", "params", "standardize"}, "dataset");
        if (d.contains("params")) c.dataset.synthetic = d["params"].get<datasets::SynthConfig>();
      } else if (type == "csv") {
        c.dataset.kind = DatasetSpec::Kind::csv;
        detail::check_keys(d, {"type", "path", "target", "protected", "kinds", "train_ratio", "standardize"},
                           "dataset");
        c.dataset.path = detail::resolve_path(d.at("path").get<std::string>(), base_dir);
        c.dataset.target = d.at("target").get<std::string>();
      } else if (type == "manifest") {
        c.dataset.kind = DatasetSpec::Kind::manifest;
        detail::check_keys(d, {"type", "manifest", "name", "cache_dir", "train_ratio", "standardize"}, "dataset");
        c.dataset.path = detail::resolve_path(d.at("manifest").get<std::string>(), base_dir);
        c.dataset.name = d.at("name").get<std::string>();
        c.dataset.cache_dir = detail::resolve_path(d.value("cache_dir", std::string("cache")), base_dir);
      } else {
        throw ConfigError("dataset: unknown type '" + type + "'");
      }
      if (d.contains("protected") && !d["protected"].is_null()) c.dataset.protected_column = d["protected"].get<std::string>();
      if (d.contains("kinds")) {
        for (auto it = d["kinds"].begin(); it != d["kinds"].end(); ++it) {
          c.dataset.kinds[it.key()] = datasets::parse_feature_kind(it.value().get<std::string>());
        }
      }
      detail::maybe(d, "train_ratio", c.dataset.train_ratio);
      if (d.contains("standardize") && !d["standardize"].is_null()) c.dataset.standardize = d["standardize"].get<bool>();
    }
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j["models"]) {
        if (m.is_string()) {
          c.models.push_back({models::parse_family(m.get<std::string>()), {}});
        } else {
          ModelSpec s{models::parse_family(m.at("family").get<std::string>()), {}};
          if (m.contains("path")) s.path = detail::resolve_path(m["path"].get<std::string>(), base_dir);
          c.models.push_back(s);
        }
      }
    }
    if (j.contains("explainers")) {
      c.explainers.clear();
      if (j["explainers"].is_string() && j["explainers"].get<std::string>() == "all") {
        c.explainers.assign(explainers::kAllMethods.begin(), explainers::kAllMethods.end());
      } else {
        for (const auto& m : j["explainers"]) c.explainers.push_back(explainers::parse_method(m.get<std::string>()));
      }
    }
    if (j.contains("explainer_params")) c.explainer_params = j["explainer_params"].get<explainers::ExplainerConfig>();
    if (j.contains("metrics")) {
      c.metrics.clear();
      if (j["metrics"].is_string() && j["metrics"].get<std::string>() == "all") {
        c.metrics = metrics::all_metrics();
      } else {
        for (const auto& m : j["metrics"]) c.metrics.push_back(metrics::parse_metric(m.get<std::string>()));
      }
    }
    if (j.contains("topk")) {
      detail::maybe(j["topk"], "percentage_most_important", c.topk.percentage_most_important);
      if (j["topk"].contains("k") && !j["topk"]["k"].is_null()) c.topk.k = j["topk"]["k"].get<int>();
    }
    if (j.contains("perturbation")) {
      const auto& p = j["perturbation"];
      detail::maybe(p, "mean", c.perturbation.mean);
      detail::maybe(p, "std", c.perturbation.std);
      detail::maybe(p, "flip_percentage", c.perturbation.flip_percentage);
      detail::maybe(p, "n_perturbations", c.perturbation.n_perturbations);
    }
    if (j.contains("stability")) {
      const auto& s = j["stability"];
      detail::maybe(s, "p", c.stability.p);
      detail::maybe(s, "eps_min", c.stability.eps_min);
      detail::maybe(s, "eps_num", c.stability.eps_num);
      detail::maybe(s, "n_neighbors", c.stability.n_neighbors);
    }
    detail::maybe(j, "seed", c.seed);
    if (j.contains("train")) {
      models::TrainConfig t;
      t.seed = c.seed;
      const auto& tj = j["train"];
      detail::maybe(tj, "epochs", t.epochs);
      detail::maybe(tj, "learning_rate", t.learning_rate);
      detail::maybe(tj, "batch_size", t.batch_size);
      detail::maybe(tj, "seed", t.seed);
      c.train = t;
    }
    if (j.contains("subgroup") && !j["subgroup"].is_null()) {
      const auto& s = j["subgroup"];
      SubgroupRule r;
      r.feature = s.at("feature").is_number() ? std::to_string(s["feature"].get<int>()) : s["feature"].get<std::string>();
      r.threshold = s.value("threshold", 0.0);
      c.subgroup = r;
    }
    if (j.contains("max_instances") && !j["max_instances"].is_null()) c.max_instances = j["max_instances"].get<std::size_t>();
    detail::maybe(j, "workers", c.workers);
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    detail::maybe(j, "formats", c.formats);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path());
}

// Every result-affecting setting with defaults filled in. Keys are sorted by
// nlohmann::json, which makes the dump canonical.
inline nlohmann::json resolved_json(const BenchmarkConfig& c) {
  nlohmann::json j;
  auto& d = j["dataset"];
  switch (c.dataset.kind) {
    case DatasetSpec::Kind::synthetic:
      d["type"] = "synthetic";
      d["params"] = c.dataset.synthetic;
      break;
    case DatasetSpec::Kind::csv:
      d["type"] = "csv";
      d["path"] = c.dataset.path;
      d["target"] = c.dataset.target;
      d["train_ratio"] = c.dataset.train_ratio;
      break;
    case DatasetSpec::Kind::manifest:
      d["type"] = "manifest";
      d["manifest"] = c.dataset.path;
      d["name"] = c.dataset.name;
      d["train_ratio"] = c.dataset.train_ratio;
      break;
  }
  d["protected"] = c.dataset.protected_column ? nlohmann::json(*c.dataset.protected_column) : nlohmann::json(nullptr);
  d["kinds"] = nlohmann::json::object();
  for (const auto& [k, v] : c.dataset.kinds) d["kinds"][k] = std::string(datasets::to_string(v));
  d["standardize"] = c.dataset.effective_standardize();

  j["models"] = nlohmann::json::array();
  for (const auto& m : c.models) {
    nlohmann::json mj{{"family", std::string(models::to_string(m.family))}};
    if (m.path) mj["path"] = *m.path;
    j["models"].push_back(mj);
  }
  j["explainers"] = nlohmann::json::array();
  for (auto m : c.explainers) j["explainers"].push_back(std::string(explainers::method_id(m)));
  j["explainer_params"] = c.explainer_params;
  j["metrics"] = nlohmann::json::array();
  for (const auto& m : c.metrics) j["metrics"].push_back(m.name());
  j["topk"] = {{"percentage_most_important", c.topk.percentage_most_important},
               {"k", c.topk.k ? nlohmann::json(*c.topk.k) : nlohmann::json(nullptr)}};
  j["perturbation"] = {{"mean", c.perturbation.mean},
                       {"std", c.perturbation.std},
                       {"flip_percentage", c.perturbation.flip_percentage},
                       {"n_perturbations", c.perturbation.n_perturbations}};
  j["stability"] = {{"p", c.stability.p},
                    {"eps_min", c.stability.eps_min},
                    {"eps_num", c.stability.eps_num},
                    {"n_neighbors", c.stability.n_neighbors}};
  const auto t = c.train_config();
  j["train"] = {{"epochs", t.epochs},
                {"learning_rate", t.learning_rate},
                {"batch_size", t.batch_size},
                {"beta1", t.beta1},
                {"beta2", t.beta2},
                {"epsilon", t.epsilon},
                {"seed", t.seed}};
  j["subgroup"] = c.subgroup ? nlohmann::json{{"feature", c.subgroup->feature}, {"threshold", c.subgroup->threshold}}
                             : nlohmann::json(nullptr);
  j["max_instances"] = c.max_instances ? nlohmann::json(*c.max_instances) : nlohmann::json(nullptr);
  j["seed"] = c.seed;
  return j;
}

inline std::string fingerprint(const BenchmarkConfig& c) { return sha256_hex(resolved_json(c).dump()); }

}  // namespace xaibench::harness
