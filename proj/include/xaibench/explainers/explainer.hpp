#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "xaibench/explainers/gradients.hpp"
#include "xaibench/explainers/kernel_shap.hpp"
#include "xaibench/explainers/lime.hpp"

namespace xaibench::explainers {

enum class Method { random, vanilla_gradient, gradient_x_input, smoothgrad, integrated_gradients, shap, lime };

inline constexpr std::array<Method, 7> kAllMethods{Method::random,        Method::vanilla_gradient,
                                                   Method::integrated_gradients, Method::gradient_x_input,
                                                   Method::smoothgrad,    Method::shap,
                                                   Method::lime};

// Config token used in files and on the command line.
inline std::string_view method_id(Method m) {
  switch (m) {
    case Method::random: return "random";
    case Method::vanilla_gradient: return "grad";
    case Method::gradient_x_input: return "itg";
    case Method::smoothgrad: return "sg";
    case Method::integrated_gradients: return "ig";
    case Method::shap: return "shap";
    case Method::lime: return "lime";
  }
  return "?";
}

inline std::string_view method_display_name(Method m) {
  switch (m) {
    case Method::random: return "Random";
    case Method::vanilla_gradient: return "VanillaGrad";
    case Method::gradient_x_input: return "GradientXInput";
    case Method::smoothgrad: return "SmoothGrad";
    case Method::integrated_gradients: return "IntegratedGrad";
    case Method::shap: return "SHAP";
    case Method::lime: return "LIME";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : kAllMethods)
    if (s == method_id(m) || s == method_display_name(m)) return m;
  if (s == "vanilla_grad" || s == "vanilla_gradient") return Method::vanilla_gradient;
  if (s == "grad_x_input" || s == "gradient_x_input") return Method::gradient_x_input;
  if (s == "smoothgrad") return Method::smoothgrad;
  if (s == "integrated_gradients") return Method::integrated_gradients;
  if (s == "kernel_shap") return Method::shap;
  throw ConfigError("unknown explanation method '" + std::string(s) + "'");
}

struct Explanation {
  Vector attributions;
  Method method = Method::random;
  std::size_t instance_id = 0;
  std::uint64_t seed = 0;
};

// Binds a method to its configuration and baselines. `explain` is pure: the
// result depends only on (model, x, seed).
struct Explainer {
  Method method = Method::random;
  ExplainerConfig config;
  Vector ig_baseline;    // used when config.ig.baseline == train_mean
  Vector shap_baseline;  // used when config.shap.baseline == train_mean

  template <models::Classifier M>
  Vector attribute(const M& model, const Vector& x, std::uint64_t seed) const {
    switch (method) {
      case Method::random:
        return random_attribution(x.size(), seed);
      case Method::vanilla_gradient:
        return vanilla_gradient(model, x, config.grad);
      case Method::gradient_x_input:
        return gradient_x_input(model, x);
      case Method::smoothgrad:
        return smoothgrad(model, x, config.smoothgrad, seed);
      case Method::integrated_gradients:
        return integrated_gradients(model, x, baseline_for(config.ig.baseline, ig_baseline, x.size()), config.ig);
      case Method::shap:
        return kernel_shap(model, x, baseline_for(config.shap.baseline, shap_baseline, x.size()), config.shap, seed);
      case Method::lime:
        return lime(model, x, config.lime, seed);
    }
    throw ConfigError("unhandled explanation method");
  }

  template <models::Classifier M>
  Explanation explain(const M& model, const Vector& x, std::size_t instance_id, std::uint64_t seed) const {
    Vector a = attribute(model, x, seed);
    if (!a.allFinite()) {
      throw Error(std::string(method_id(method)) + ": non-finite attribution for instance " +
                  std::to_string(instance_id));
    }
    return Explanation{std::move(a), method, instance_id, seed};
  }

 private:
  static Vector baseline_for(BaselineKind kind, const Vector& means, Eigen::Index d) {
    if (kind == BaselineKind::zero) return Vector::Zero(d);
    if (means.size() != d) throw DimensionError("explainer: train-mean baseline has wrong length");
    return means;
  }
};

}  // namespace xaibench::explainers
