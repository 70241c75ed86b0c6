#pragma once

// Small models and brute-force oracles shared by the unit and acceptance
// suites.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "xaibench/models/linear.hpp"
#include "xaibench/models/mlp.hpp"
#include "xaibench/rng.hpp"

namespace xaibench::testing {

// Class-1 "probability" is the raw score v.x + c; class 0 sits far below so
// class 1 is always the predicted class.
struct LinearScore {
  Vector v;
  double c = 0.0;

  Eigen::Index n_features() const { return v.size(); }
  Eigen::Index n_classes() const { return 2; }
  Vector predict_proba(const Vector& x) const {
    Vector p(2);
    p << -1e9, v.dot(x) + c;
    return p;
  }
  Vector input_gradient(const Vector&, int cls) const { return cls == 1 ? v : Vector::Zero(v.size()); }
  Vector representation(const Vector& x) const { return predict_proba(x); }
};

// Same output everywhere.
struct ConstantModel {
  Eigen::Index d = 3;
  double p1 = 0.7;

  Eigen::Index n_features() const { return d; }
  Eigen::Index n_classes() const { return 2; }
  Vector predict_proba(const Vector&) const {
    Vector p(2);
    p << 1.0 - p1, p1;
    return p;
  }
  Vector input_gradient(const Vector&, int) const { return Vector::Zero(d); }
  Vector representation(const Vector&) const { return Vector::Zero(1); }
};

inline Vector normal_vector(Eigen::Index d, Rng& rng, double scale = 1.0) {
  Vector v(d);
  for (auto& x : v) x = rng.normal(0.0, scale);
  return v;
}

inline models::LinearModel random_linear(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  models::LinearModel m(d, 2);
  for (auto& w : m.weights.reshaped()) w = rng.normal();
  for (auto& b : m.bias) b = rng.normal();
  return m;
}

inline models::MlpModel random_mlp(Eigen::Index d, std::uint64_t seed, Eigen::Index h = 16) {
  Rng rng(seed);
  models::MlpModel m(d, 2, h, h);
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

inline double rel_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1e-12, std::max(a.norm(), b.norm()));
}

// Exact Shapley values of the predicted-class output by subset enumeration.
template <class M>
Vector brute_force_shapley(const M& m, const Vector& x, const Vector& baseline) {
  const Eigen::Index d = x.size();
  const Vector px = m.predict_proba(x);
  const int cls = static_cast<int>(std::max_element(px.begin(), px.end()) - px.begin());
  const std::uint64_t total = std::uint64_t{1} << d;
  std::vector<double> value(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Vector z = baseline;
    for (Eigen::Index j = 0; j < d; ++j)
      if ((mask >> j) & 1U) z[j] = x[j];
    value[mask] = m.predict_proba(z)[cls];
  }
  std::vector<double> fact(static_cast<std::size_t>(d) + 1, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  Vector phi = Vector::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if ((mask >> i) & 1U) continue;
      const int s = std::popcount(mask);
      const double w = fact[static_cast<std::size_t>(s)] * fact[static_cast<std::size_t>(d - s - 1)] /
                       fact[static_cast<std::size_t>(d)];
      phi[i] += w * (value[mask | (std::uint64_t{1} << i)] - value[mask]);
    }
  }
  return phi;
}

// ---- agreement oracles written directly from the definitions -------------

// Top-k by |value|, ties by lower index, via full sort of (−|v|, index) keys.
inline std::vector<int> oracle_topk(const Vector& a, int k) {
  std::vector<std::pair<double, int>> keys;
  for (int i = 0; i < a.size(); ++i) keys.emplace_back(-std::abs(a[i]), i);
  std::sort(keys.begin(), keys.end());
  std::vector<int> out;
  for (int i = 0; i < k; ++i) out.push_back(keys[static_cast<std::size_t>(i)].second);
  return out;
}

inline int oracle_sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

inline double oracle_fa(const Vector& e, const Vector& g, int k) {
  const auto a = oracle_topk(e, k), b = oracle_topk(g, k);
  int hits = 0;
  for (int f : a)
    for (int h : b) hits += f == h;
  return static_cast<double>(hits) / k;
}

inline double oracle_sa(const Vector& e, const Vector& g, int k) {
  const auto a = oracle_topk(e, k), b = oracle_topk(g, k);
  int hits = 0;
  for (int f : a)
    for (int h : b) hits += f == h && oracle_sign(e[f]) == oracle_sign(g[f]);
  return static_cast<double>(hits) / k;
}

inline double oracle_ra(const Vector& e, const Vector& g, int k) {
  const auto a = oracle_topk(e, k), b = oracle_topk(g, k);
  int hits = 0;
  for (int r = 0; r < k; ++r) hits += a[static_cast<std::size_t>(r)] == b[static_cast<std::size_t>(r)];
  return static_cast<double>(hits) / k;
}

inline double oracle_sra(const Vector& e, const Vector& g, int k) {
  const auto a = oracle_topk(e, k), b = oracle_topk(g, k);
  int hits = 0;
  for (int r = 0; r < k; ++r) {
    const int f = a[static_cast<std::size_t>(r)];
    hits += f == b[static_cast<std::size_t>(r)] && oracle_sign(e[f]) == oracle_sign(g[f]);
  }
  return static_cast<double>(hits) / k;
}

// Pearson correlation of average ranks of |.| (Spearman with ties).
inline double oracle_rc(const Vector& e, const Vector& g) {
  const auto ranks = [](const Vector& a) {
    const Eigen::Index d = a.size();
    Vector r(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      double less = 0, equal = 0;
      for (Eigen::Index j = 0; j < d; ++j) {
        less += std::abs(a[j]) < std::abs(a[i]);
        equal += std::abs(a[j]) == std::abs(a[i]);
      }
      r[i] = less + (equal + 1) / 2.0;
    }
    return r;
  };
  const Vector re = ranks(e), rg = ranks(g);
  const double me = re.mean(), mg = rg.mean();
  const double num = ((re.array() - me) * (rg.array() - mg)).sum();
  const double den = std::sqrt((re.array() - me).square().sum() * (rg.array() - mg).square().sum());
  return den == 0 ? std::nan("") : num / den;
}

// Fraction of feature pairs whose |.| order (including ties) agrees.
inline double oracle_pra(const Vector& e, const Vector& g) {
  const Eigen::Index d = e.size();
  int agree = 0, pairs = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const int se = oracle_sign(std::abs(e[i]) - std::abs(e[j]));
      const int sg = oracle_sign(std::abs(g[i]) - std::abs(g[j]));
      agree += se == sg;
      ++pairs;
    }
  }
  return static_cast<double>(agree) / pairs;
}

}  // namespace xaibench::testing
