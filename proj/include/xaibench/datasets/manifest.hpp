#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xaibench/datasets/csv.hpp"
#include "xaibench/datasets/types.hpp"

namespace xaibench::datasets {

struct DatasetManifestEntry {
  std::string name;
  std::string url;
  std::string sha256;
  std::string target;
  std::optional<std::string> protected_column;
  std::map<std::string, FeatureKind> kinds;

  CsvOptions csv_options(double train_ratio, std::uint64_t seed) const {
    return CsvOptions{target, protected_column, kinds, train_ratio, seed};
  }
};

inline DatasetManifestEntry parse_manifest_entry(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("manifest: entry must be an object");
  DatasetManifestEntry e;
  try {
    e.name = j.at("name").get<std::string>();
    e.url = j.at("url").get<std::string>();
    e.sha256 = j.at("sha256").get<std::string>();
    e.target = j.at("target").get<std::string>();
    if (j.contains("protected") && !j["protected"].is_null()) e.protected_column = j["protected"].get<std::string>();
    if (j.contains("kinds")) {
      for (auto it = j["kinds"].begin(); it != j["kinds"].end(); ++it) {
        e.kinds[it.key()] = parse_feature_kind(it.value().get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("manifest: ") + ex.what());
  }
  if (e.name.empty() || e.name.find('/') != std::string::npos || e.name == "." || e.name == "..") {
    throw ParseError("manifest: invalid dataset name '" + e.name + "'");
  }
  if (e.sha256.size() != 64 || e.sha256.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw ParseError("manifest: entry '" + e.name + "' needs a lowercase hex sha256");
  }
  return e;
}

inline std::vector<DatasetManifestEntry> parse_manifest(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("manifest: document must be a JSON array");
  std::vector<DatasetManifestEntry> out;
  for (const auto& j : doc) out.push_back(parse_manifest_entry(j));
  return out;
}

inline std::vector<DatasetManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("manifest: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError("manifest: " + std::string(ex.what()));
  }
  return parse_manifest(doc);
}

inline const DatasetManifestEntry& find_entry(const std::vector<DatasetManifestEntry>& entries,
                                              const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw ConfigError("manifest: no dataset named '" + name + "'");
}

}  // namespace xaibench::datasets
