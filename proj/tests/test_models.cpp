#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "xaibench/datasets/split.hpp"
#include "xaibench/datasets/synthetic.hpp"
#include "xaibench/models/model.hpp"
#include "xaibench/models/serialize.hpp"
#include "xaibench/models/train.hpp"

using namespace xaibench;
using namespace xaibench::models;
namespace fs = std::filesystem;

namespace {

Vector random_vector(Eigen::Index d, Rng& rng, double scale = 1.0) {
  Vector v(d);
  for (auto& x : v) x = rng.normal(0.0, scale);
  return v;
}

LinearModel random_linear(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  LinearModel m(d, 2);
  for (auto& w : m.weights.reshaped()) w = rng.normal();
  for (auto& b : m.bias) b = rng.normal();
  return m;
}

MlpModel random_mlp(Eigen::Index d, std::uint64_t seed, Eigen::Index h = 16) {
  Rng rng(seed);
  MlpModel m(d, 2, h, h);
  for (Matrix* w : {&m.w1, &m.w2, &m.w3})
    for (auto& v : w->reshaped()) v = rng.normal(0.0, 1.0 / std::sqrt(static_cast<double>(w->cols())));
  for (Vector* b : {&m.b1, &m.b2, &m.b3})
    for (auto& v : *b) v = rng.normal(0.0, 0.3);
  return m;
}

// Central differences of p_c.
template <class M>
Vector fd_gradient(const M& m, const Vector& x, int c, double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector a = x, b = x;
    a[j] += h;
    b[j] -= h;
    g[j] = (m.predict_proba(a)[c] - m.predict_proba(b)[c]) / (2 * h);
  }
  return g;
}

double rel_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1e-12, std::max(a.norm(), b.norm()));
}

datasets::DatasetSplit two_blobs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(static_cast<Eigen::Index>(n), 2);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 2);
    const double c = y[i] ? 4.0 : -4.0;
    X(static_cast<Eigen::Index>(i), 0) = c + rng.normal();
    X(static_cast<Eigen::Index>(i), 1) = c + rng.normal();
  }
  return datasets::split(X, y, 0.7, seed);
}

}  // namespace

TEST(Linear, ZeroModelIsUniform) {
  LinearModel m(3, 2);
  const Vector p = m.predict_proba(Vector::Ones(3));
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
  EXPECT_EQ(m.input_gradient(Vector::Ones(3), 1), Vector::Zero(3));
}

TEST(Linear, ProbabilitiesMatchIndependentSoftmax) {
  const auto m = random_linear(5, 1);
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = random_vector(5, rng);
    const double z0 = m.weights.row(0).dot(x) + m.bias[0];
    const double z1 = m.weights.row(1).dot(x) + m.bias[1];
    const double p1 = 1.0 / (1.0 + std::exp(z0 - z1));
    const Vector p = m.predict_proba(x);
    EXPECT_NEAR(p[1], p1, 1e-12);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    const Vector r = m.representation(x);
    EXPECT_NEAR(r[0], z0, 1e-12);
    EXPECT_NEAR(r[1], z1, 1e-12);
  }
}

TEST(Linear, GradientMatchesClosedForm) {
  const auto m = random_linear(6, 3);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_vector(6, rng);
    const double p = m.predict_proba(x)[1];
    const Vector expect = p * (1 - p) * m.coefficient_difference();
    EXPECT_LT((m.input_gradient(x, 1) - expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(rel_error(m.input_gradient(x, 0), fd_gradient(m, x, 0)), 1e-4);
  }
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  const auto m = random_mlp(8, 5);
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_vector(8, rng, 2.0);
    for (int c = 0; c < 2; ++c) EXPECT_LT(rel_error(m.input_gradient(x, c), fd_gradient(m, x, c)), 1e-4);
  }
}

TEST(Mlp, BatchPathsMatchSingleRow) {
  const auto m = random_mlp(4, 7);
  Rng rng(8);
  Matrix X(10, 4);
  for (auto& v : X.reshaped()) v = rng.normal();
  const Matrix P = m.predict_proba_batch(X);
  const Matrix G = m.input_gradient_batch(X, 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Vector x = X.row(i).transpose();
    EXPECT_LT((P.row(i).transpose() - m.predict_proba(x)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((G.row(i).transpose() - m.input_gradient(x, 1)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Mlp, RepresentationShapeAndAffine) {
  MlpModel m(3, 2);
  m.b1.setLinSpaced(100, -1.0, 1.0);
  EXPECT_EQ(m.representation(Vector::Ones(3)).size(), 100);
  EXPECT_EQ(m.representation(Vector::Ones(3)), m.b1);
  EXPECT_EQ(LinearModel(3, 2).representation(Vector::Ones(3)).size(), 2);
}

TEST(Train, LogisticSeparatesBlobsAndIsDeterministic) {
  const auto s = two_blobs(400, 1);
  TrainConfig cfg;
  const auto a = train_logistic(s, cfg);
  const auto b = train_logistic(s, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_GE(accuracy(a, s.test_X, s.test_y), 0.99);
  const auto m = train_mlp(s, cfg);
  EXPECT_GE(accuracy(m, s.test_X, s.test_y), 0.99);
}

TEST(Train, ZeroEpochsKeepsInitialisation) {
  const auto s = two_blobs(100, 2);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto m = train_mlp(s, cfg);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vector p = m.predict_proba(random_vector(2, rng));
    EXPECT_NEAR(p[1], 0.5, 0.3);
  }
}

TEST(Train, LossDecreasesOnSynthetic) {
  const auto ds = datasets::generate_synthetic({});
  TrainConfig cfg;
  cfg.epochs = 10;
  for (int fam = 0; fam < 2; ++fam) {
    std::vector<double> trace;
    if (fam == 0) train_logistic(ds.split, cfg, &trace);
    else train_mlp(ds.split, cfg, &trace);
    ASSERT_EQ(trace.size(), 10u);
    EXPECT_LT(trace.back(), trace.front());
  }
}

TEST(Train, SingleClassIsRejected) {
  auto s = two_blobs(50, 4);
  std::fill(s.train_y.begin(), s.train_y.end(), 1);
  EXPECT_THROW(train_logistic(s, {}), ConfigError);
  TrainConfig bad;
  bad.learning_rate = 0;
  EXPECT_THROW(train_mlp(two_blobs(50, 4), bad), ConfigError);
}

TEST(Serialize, RoundTripPreservesPredictions) {
  const auto dir = fs::temp_directory_path() / ("xaibench_models_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  Rng rng(9);
  for (int fam = 0; fam < 2; ++fam) {
    Model m = fam == 0 ? Model(random_linear(5, 10)) : Model(random_mlp(5, 11));
    m.meta().test_accuracy = 0.75;
    const auto path = (dir / ("m" + std::to_string(fam) + ".json")).string();
    save_model(m, path);
    const Model back = load_model(path);
    EXPECT_EQ(back.family(), m.family());
    EXPECT_EQ(back.meta().test_accuracy, 0.75);
    for (int t = 0; t < 100; ++t) {
      const Vector x = random_vector(5, rng);
      EXPECT_EQ(back.predict_proba(x), m.predict_proba(x));
    }
  }
}

TEST(Serialize, TruncatedFileIsAParseError) {
  const auto path = fs::temp_directory_path() / ("xaibench_trunc_" + std::to_string(::getpid()) + ".json");
  const std::string full = model_to_json(Model(random_mlp(3, 12))).dump();
  std::ofstream(path) << full.substr(0, full.size() / 2);
  EXPECT_THROW(load_model(path.string()), ParseError);
  auto doc = model_to_json(Model(random_linear(3, 13)));
  doc["format_version"] = 99;
  EXPECT_THROW(model_from_json(doc), ParseError);
}

TEST(Serialize, LoadedSyntheticModelReproducesAccuracy) {
  const auto ds = datasets::generate_synthetic({});
  Model m = train_logistic(ds.split, {});
  const double acc = accuracy(m, ds.split.test_X, ds.split.test_y);
  m.meta().test_accuracy = acc;
  const Model back = model_from_json(nlohmann::json::parse(model_to_json(m).dump()));
  EXPECT_EQ(accuracy(back, ds.split.test_X, ds.split.test_y), *back.meta().test_accuracy);
}
