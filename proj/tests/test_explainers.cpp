#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xaibench/explainers/explainer.hpp"
#include "xaibench/metrics/agreement.hpp"
#include "xaibench/models/model.hpp"

using namespace xaibench;
using namespace xaibench::explainers;
using xaibench::testing::brute_force_shapley;
using xaibench::testing::ConstantModel;
using xaibench::testing::LinearScore;
using xaibench::testing::normal_vector;
using xaibench::testing::random_linear;
using xaibench::testing::random_mlp;

TEST(Random, DeterministicBoundedCentered) {
  EXPECT_EQ(random_attribution(5, 3), random_attribution(5, 3));
  EXPECT_NE(random_attribution(5, 3), random_attribution(5, 4));
  const Vector a = random_attribution(100000, 1);
  EXPECT_LT(a.cwiseAbs().maxCoeff(), 1.0);
  // Uniform(-1, 1) has std 1/sqrt(3).
  EXPECT_LT(std::abs(a.mean()), 3.0 / std::sqrt(3.0) / std::sqrt(100000.0));
}

TEST(VanillaGradient, LrMagnitudeOrderMatchesCoefficients) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_linear(10, 100 + t);
    const Vector x = normal_vector(10, rng);
    const Vector g = vanilla_gradient(m, x);
    EXPECT_EQ(metrics::pairwise_rank_agreement(g, m.coefficient_difference()), 1.0);
    EXPECT_EQ(metrics::importance_order(g), metrics::importance_order(m.coefficient_difference()));
  }
  EXPECT_EQ(vanilla_gradient(models::LinearModel(4, 2), Vector::Ones(4)), Vector::Zero(4));
}

TEST(VanillaGradient, MatchesFiniteDifferences) {
  const auto m = random_mlp(6, 2);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vector x = normal_vector(6, rng);
    const int c = models::predicted_class(m, x);
    EXPECT_LT(xaibench::testing::rel_error(vanilla_gradient(m, x), xaibench::testing::fd_gradient(m, x, c)), 1e-4);
  }
  GradConfig abs_cfg{true};
  const Vector x = normal_vector(6, rng);
  EXPECT_EQ(vanilla_gradient(m, x, abs_cfg), vanilla_gradient(m, x).cwiseAbs());
}

TEST(GradientXInput, Properties) {
  const auto m = random_mlp(5, 4);
  EXPECT_EQ(gradient_x_input(m, Vector::Zero(5)), Vector::Zero(5));
  Vector e = Vector::Zero(5);
  e[2] = 1.5;
  const Vector a = gradient_x_input(m, e);
  for (int j = 0; j < 5; ++j)
    if (j != 2) EXPECT_EQ(a[j], 0.0);
  Rng rng(5);
  const Vector x = normal_vector(5, rng);
  EXPECT_EQ(gradient_x_input(m, x), vanilla_gradient(m, x).cwiseProduct(x));
}

TEST(SmoothGrad, ZeroNoiseIsVanillaGradient) {
  const auto m = random_mlp(4, 6);
  Rng rng(7);
  const Vector x = normal_vector(4, rng);
  EXPECT_EQ(smoothgrad(m, x, {10, 0.0}, 1), vanilla_gradient(m, x));
}

TEST(SmoothGrad, SingleSampleIsGradientAtTheDraw) {
  const auto m = random_mlp(4, 8);
  Rng rng(9);
  const Vector x = normal_vector(4, rng);
  const double s = 0.3;
  Rng draw(42);
  Vector xp(4);
  for (int j = 0; j < 4; ++j) xp[j] = x[j] + s * draw.normal();
  const Vector expect = m.input_gradient(xp, models::predicted_class(m, x));
  EXPECT_LT((smoothgrad(m, x, {1, s}, 42) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SmoothGrad, LrConvergesToMonteCarloOracle) {
  const auto m = random_linear(3, 10);
  const Vector x = Vector::Constant(3, 0.2);
  const int c = models::predicted_class(m, x);
  const double s = std::sqrt(0.05);
  Rng rng(11);
  const int n = 200000;
  Vector sum = Vector::Zero(3), sq = Vector::Zero(3);
  for (int i = 0; i < n; ++i) {
    const Vector g = m.input_gradient(x + s * normal_vector(3, rng), c);
    sum += g;
    sq += g.cwiseProduct(g);
  }
  const Vector mc = sum / n;
  const Vector se_mc = ((sq / n - mc.cwiseProduct(mc)) / n).cwiseSqrt();
  const int k = 2000;
  const Vector est = smoothgrad(m, x, {k, s}, 12);
  for (int j = 0; j < 3; ++j) {
    // Spread of a k-sample estimate plus the oracle's own error.
    const double se = std::sqrt(se_mc[j] * se_mc[j] * (1.0 + static_cast<double>(n) / k));
    EXPECT_LT(std::abs(est[j] - mc[j]), 3 * se) << j;
  }
}

TEST(IntegratedGradients, LinearScoreGivesWeights) {
  Rng rng(13);
  LinearScore f{normal_vector(6, rng), 0.4};
  for (int t = 0; t < 5; ++t) {
    const Vector x = normal_vector(6, rng), b = normal_vector(6, rng);
    EXPECT_LT((integrated_gradients(f, x, b, {}) - f.v).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(IntegratedGradients, BaselineEqualToInputGivesGradient) {
  const auto m = random_mlp(5, 14);
  Rng rng(15);
  const Vector x = normal_vector(5, rng);
  EXPECT_LT((integrated_gradients(m, x, x, {}) - vanilla_gradient(m, x)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(IntegratedGradients, QuadratureIsConverged) {
  const auto m = random_linear(5, 16);
  Rng rng(17);
  const Vector x = normal_vector(5, rng, 2.0);
  IntegratedGradientsConfig coarse{50}, fine{5000};
  const Vector b = Vector::Zero(5);
  EXPECT_LT((integrated_gradients(m, x, b, coarse) - integrated_gradients(m, x, b, fine)).cwiseAbs().maxCoeff(),
            1e-6);
  IntegratedGradientsConfig classic{50, BaselineKind::zero, true};
  EXPECT_EQ(integrated_gradients(m, x, b, classic), integrated_gradients(m, x, b, coarse).cwiseProduct(x));
}

TEST(Lime, RecoversLinearScoreCoefficients) {
  Rng rng(18);
  LinearScore f{normal_vector(8, rng), -0.3};
  const Vector x = normal_vector(8, rng);
  const Vector a = lime(f, x, LimeConfig{}, 5);
  EXPECT_LT(((a - f.v).array().abs() / f.v.array().abs()).maxCoeff(), 1e-4);
  EXPECT_EQ(lime(f, x, LimeConfig{}, 5), a);
}

TEST(Lime, ConstantModelGivesZero) {
  const Vector a = lime(ConstantModel{4, 0.8}, Vector::Ones(4), LimeConfig{}, 1);
  EXPECT_LT(a.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(KernelShap, KernelWeights) {
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 1), 3.0 / (4.0 * 1 * 3));
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 2), 3.0 / (6.0 * 2 * 2));
}

TEST(KernelShap, ExhaustiveMatchesBruteForceShapley) {
  for (int d = 2; d <= 10; ++d) {
    const auto m = random_mlp(d, 200 + d);
    Rng rng(300 + d);
    const Vector x = normal_vector(d, rng), b = normal_vector(d, rng);
    const Vector phi = brute_force_shapley(m, x, b);
    const Vector est = kernel_shap_exhaustive(m, x, b);
    EXPECT_LT((est - phi).cwiseAbs().maxCoeff(), 1e-6) << "d=" << d;
    const int c = models::predicted_class(m, x);
    EXPECT_NEAR(est.sum(), m.predict_proba(x)[c] - m.predict_proba(b)[c], 1e-6);
  }
}

TEST(KernelShap, LinearScoreGivesWeightTimesOffset) {
  Rng rng(19);
  LinearScore f{normal_vector(10, rng), 0.1};
  const Vector x = normal_vector(10, rng), b = normal_vector(10, rng);
  const Vector exact = f.v.cwiseProduct(x - b);
  Vector avg = Vector::Zero(10);
  for (int s = 0; s < 20; ++s) avg += kernel_shap(f, x, b, KernelShapConfig{}, s) / 20.0;
  EXPECT_LT(((avg - exact).array().abs() / exact.array().abs()).maxCoeff(), 0.05);
}

TEST(KernelShap, ConstantModelAndDeterminism) {
  const Vector a = kernel_shap(ConstantModel{5, 0.6}, Vector::Ones(5), Vector::Zero(5), {}, 3);
  EXPECT_LT(a.cwiseAbs().maxCoeff(), 1e-9);
  const auto m = random_mlp(5, 20);
  EXPECT_EQ(kernel_shap(m, Vector::Ones(5), Vector::Zero(5), {}, 3),
            kernel_shap(m, Vector::Ones(5), Vector::Zero(5), {}, 3));
}

TEST(Explainer, DispatchesEveryMethod) {
  const models::Model m = random_mlp(4, 21);
  Rng rng(22);
  const Vector x = normal_vector(4, rng);
  for (Method method : kAllMethods) {
    Explainer e;
    e.method = method;
    e.ig_baseline = e.shap_baseline = Vector::Zero(4);
    const auto out = e.explain(m, x, 7, 99);
    EXPECT_EQ(out.attributions.size(), 4);
    EXPECT_EQ(out.instance_id, 7u);
    EXPECT_EQ(e.explain(m, x, 7, 99).attributions, out.attributions) << method_id(method);
    EXPECT_EQ(parse_method(method_id(method)), method);
    EXPECT_EQ(parse_method(method_display_name(method)), method);
  }
  EXPECT_THROW(parse_method("deeplift"), ConfigError);
}

TEST(ExplainerConfig, JsonRoundTripAndValidation) {
  ExplainerConfig c;
  c.lime.n_samples = 77;
  c.ig.baseline = BaselineKind::zero;
  c.shap.subset_size = 12;
  const nlohmann::json j = c;
  const auto back = j.get<ExplainerConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  ExplainerConfig bad;
  bad.smoothgrad.n_samples = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}
