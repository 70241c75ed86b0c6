#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "xaibench/error.hpp"

namespace xaibench::explainers {

struct LimeConfig {
  int n_samples = 1000;
  double kernel_width = 0.75;
  double sample_std = std::sqrt(0.05);
  bool discretize = false;
  bool sample_around_instance = true;
  double ridge = 1e-8;
};

struct SmoothGradConfig {
  int n_samples = 500;
  double std = std::sqrt(0.05);
};

enum class BaselineKind { zero, train_mean };

struct IntegratedGradientsConfig {
  int n_steps = 50;
  BaselineKind baseline = BaselineKind::train_mean;
  bool multiply_by_inputs = false;
};

struct KernelShapConfig {
  int subset_size = 50;
  BaselineKind baseline = BaselineKind::zero;
  double constraint_weight = 1e6;
};

struct GradConfig {
  bool absolute_value = false;
};

struct ExplainerConfig {
  LimeConfig lime;
  SmoothGradConfig smoothgrad;
  IntegratedGradientsConfig ig;
  KernelShapConfig shap;
  GradConfig grad;

  void validate() const {
    if (lime.n_samples < 1 || smoothgrad.n_samples < 1 || ig.n_steps < 1 || shap.subset_size < 1) {
      throw ConfigError("explainer sample counts must be positive");
    }
    if (!(lime.kernel_width > 0.0)) throw ConfigError("lime kernel width must be > 0");
    if (!(lime.sample_std >= 0.0) || !(smoothgrad.std >= 0.0)) throw ConfigError("noise std must be >= 0");
    if (lime.discretize) throw ConfigError("lime: discretized sampling is not supported");
    if (!lime.sample_around_instance) throw ConfigError("lime: only sample_around_instance=true is supported");
    if (!(shap.constraint_weight > 0.0)) throw ConfigError("shap constraint weight must be > 0");
  }
};

inline std::string to_string(BaselineKind b) { return b == BaselineKind::zero ? "zero" : "mean"; }

inline BaselineKind parse_baseline(const std::string& s) {
  if (s == "zero" || s == "none") return BaselineKind::zero;
  if (s == "mean" || s == "train_mean") return BaselineKind::train_mean;
  throw ConfigError("unknown baseline '" + s + "'");
}

inline void to_json(nlohmann::json& j, const ExplainerConfig& c) {
  j = {{"lime",
        {{"n_samples", c.lime.n_samples},
         {"kernel_width", c.lime.kernel_width},
         {"sample_std", c.lime.sample_std},
         {"discretize", c.lime.discretize},
         {"sample_around_instance", c.lime.sample_around_instance},
         {"ridge", c.lime.ridge}}},
       {"smoothgrad", {{"n_samples", c.smoothgrad.n_samples}, {"std", c.smoothgrad.std}}},
       {"ig",
        {{"method", "gausslegendre"},
         {"n_steps", c.ig.n_steps},
         {"baseline", to_string(c.ig.baseline)},
         {"multiply_by_inputs", c.ig.multiply_by_inputs}}},
       {"shap",
        {{"subset_size", c.shap.subset_size},
         {"baseline", to_string(c.shap.baseline)},
         {"constraint_weight", c.shap.constraint_weight}}},
       {"grad", {{"absolute_value", c.grad.absolute_value}}}};
}

namespace detail {
template <class T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}
}  // namespace detail

inline void from_json(const nlohmann::json& j, ExplainerConfig& c) {
  c = ExplainerConfig{};
  if (j.contains("lime")) {
    const auto& l = j["lime"];
    detail::maybe(l, "n_samples", c.lime.n_samples);
    detail::maybe(l, "kernel_width", c.lime.kernel_width);
    detail::maybe(l, "sample_std", c.lime.sample_std);
    detail::maybe(l, "discretize", c.lime.discretize);
    detail::maybe(l, "sample_around_instance", c.lime.sample_around_instance);
    detail::maybe(l, "ridge", c.lime.ridge);
  }
  if (j.contains("smoothgrad")) {
    detail::maybe(j["smoothgrad"], "n_samples", c.smoothgrad.n_samples);
    detail::maybe(j["smoothgrad"], "std", c.smoothgrad.std);
  }
  if (j.contains("ig")) {
    const auto& g = j["ig"];
    if (g.contains("method") && g["method"].get<std::string>() != "gausslegendre") {
      throw ConfigError("ig: only the gausslegendre method is supported");
    }
    detail::maybe(g, "n_steps", c.ig.n_steps);
    if (g.contains("baseline")) c.ig.baseline = parse_baseline(g["baseline"].get<std::string>());
    detail::maybe(g, "multiply_by_inputs", c.ig.multiply_by_inputs);
  }
  if (j.contains("shap")) {
    const auto& s = j["shap"];
    detail::maybe(s, "subset_size", c.shap.subset_size);
    if (s.contains("baseline")) c.shap.baseline = parse_baseline(s["baseline"].get<std::string>());
    detail::maybe(s, "constraint_weight", c.shap.constraint_weight);
  }
  if (j.contains("grad")) detail::maybe(j["grad"], "absolute_value", c.grad.absolute_value);
}

}  // namespace xaibench::explainers
