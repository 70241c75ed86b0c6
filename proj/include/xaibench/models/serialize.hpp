#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "xaibench/models/model.hpp"

namespace xaibench::models {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

template <class Tensor>
nlohmann::json tensor_data(const Tensor& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) arr.push_back(t(i, j));
  return arr;
}

inline nlohmann::json shape_of(const Matrix& m) { return {m.rows(), m.cols()}; }
inline nlohmann::json shape_of(const Vector& v) { return {v.size()}; }

inline void read_tensor(const nlohmann::json& doc, const std::string& name, Matrix& out) {
  const auto& shape = doc.at("shapes").at(name);
  const auto& data = doc.at("params").at(name);
  if (!shape.is_array() || shape.size() != 2) throw ParseError("model file: bad shape for " + name);
  const auto r = shape[0].get<Eigen::Index>();
  const auto c = shape[1].get<Eigen::Index>();
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != r * c) {
    throw ParseError("model file: " + name + " has " + std::to_string(data.size()) + " values, shape wants " +
                     std::to_string(r * c));
  }
  out.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) out(i, j) = data[static_cast<std::size_t>(i * c + j)].get<double>();
}

inline void read_tensor(const nlohmann::json& doc, const std::string& name, Vector& out) {
  const auto& shape = doc.at("shapes").at(name);
  const auto& data = doc.at("params").at(name);
  if (!shape.is_array() || shape.size() != 1) throw ParseError("model file: bad shape for " + name);
  const auto n = shape[0].get<Eigen::Index>();
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != n) {
    throw ParseError("model file: " + name + " length does not match its shape");
  }
  out.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = data[static_cast<std::size_t>(i)].get<double>();
}

inline nlohmann::json metadata_json(const TrainMetadata& m) {
  nlohmann::json j{{"dataset", m.dataset},
                   {"seed", m.seed},
                   {"epochs", m.epochs},
                   {"learning_rate", m.learning_rate},
                   {"batch_size", m.batch_size}};
  j["test_accuracy"] = m.test_accuracy ? nlohmann::json(*m.test_accuracy) : nlohmann::json(nullptr);
  return j;
}

inline TrainMetadata metadata_from_json(const nlohmann::json& j) {
  TrainMetadata m;
  m.dataset = j.value("dataset", std::string{});
  m.seed = j.value("seed", std::uint64_t{0});
  m.epochs = j.value("epochs", 0);
  m.learning_rate = j.value("learning_rate", 0.0);
  m.batch_size = j.value("batch_size", 0);
  if (j.contains("test_accuracy") && !j["test_accuracy"].is_null()) m.test_accuracy = j["test_accuracy"].get<double>();
  return m;
}

}  // namespace detail

// Self-describing JSON document; doubles are written in shortest round-trip
// form so loading restores bit-identical parameters.
inline nlohmann::json model_to_json(const Model& model) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["family"] = std::string(to_string(model.family()));
  doc["layout"] = "row-major";
  auto put = [&](const std::string& name, const auto& t) {
    doc["shapes"][name] = detail::shape_of(t);
    doc["params"][name] = detail::tensor_data(t);
  };
  if (const auto* lr = model.as_linear()) {
    put("weights", lr->weights);
    put("bias", lr->bias);
  } else {
    const auto* mlp = model.as_mlp();
    put("w1", mlp->w1);
    put("b1", mlp->b1);
    put("w2", mlp->w2);
    put("b2", mlp->b2);
    put("w3", mlp->w3);
    put("b3", mlp->b3);
  }
  doc["metadata"] = detail::metadata_json(model.meta());
  return doc;
}

inline Model model_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ParseError("model file: unsupported format_version " + std::to_string(version));
    }
    const Family family = parse_family(doc.at("family").get<std::string>());
    const TrainMetadata meta = doc.contains("metadata") ? detail::metadata_from_json(doc["metadata"]) : TrainMetadata{};
    if (family == Family::logistic) {
      LinearModel m;
      detail::read_tensor(doc, "weights", m.weights);
      detail::read_tensor(doc, "bias", m.bias);
      if (m.bias.size() != m.weights.rows()) throw ParseError("model file: bias length mismatch");
      if (!m.weights.allFinite() || !m.bias.allFinite()) throw ParseError("model file: non-finite parameters");
      m.meta = meta;
      return m;
    }
    MlpModel m;
    detail::read_tensor(doc, "w1", m.w1);
    detail::read_tensor(doc, "b1", m.b1);
    detail::read_tensor(doc, "w2", m.w2);
    detail::read_tensor(doc, "b2", m.b2);
    detail::read_tensor(doc, "w3", m.w3);
    detail::read_tensor(doc, "b3", m.b3);
    try {
      m.validate();
    } catch (const DimensionError& e) {
      throw ParseError(std::string("model file: ") + e.what());
    }
    m.meta = meta;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
}

inline void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("save_model: cannot write '" + path + "'");
  out << model_to_json(model).dump() << '\n';
  if (!out) throw IoError("save_model: write to '" + path + "' failed");
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_model: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("model file '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace xaibench::models
