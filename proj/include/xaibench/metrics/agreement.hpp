#pragma once

// Ground-truth agreement between two attribution vectors. Features are
// ranked by descending |attribution|; ties go to the lower feature index.

#include <algorithm>
#include <numeric>
#include <vector>

#include "xaibench/numeric.hpp"

namespace xaibench::metrics {

enum class AgreementMode { feature, rank, sign, signed_rank };

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Feature indices ordered from most to least important.
inline std::vector<Eigen::Index> importance_order(const Vector& a) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(a.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return std::abs(a[i]) > std::abs(a[j]); });
  return idx;
}

inline std::vector<Eigen::Index> top_k(const Vector& a, Eigen::Index k) {
  auto order = importance_order(a);
  order.resize(static_cast<std::size_t>(k));
  return order;
}

inline void check_pair(const Vector& e, const Vector& g) {
  if (e.size() != g.size()) throw DimensionError("agreement: attribution lengths differ");
}

inline double topk_agreement(const Vector& e, const Vector& g, Eigen::Index k, AgreementMode mode) {
  check_pair(e, g);
  if (k < 1 || k > e.size()) throw ConfigError("topk_agreement: need 1 <= k <= d");
  const auto te = top_k(e, k);
  const auto tg = top_k(g, k);
  std::size_t hits = 0;
  switch (mode) {
    case AgreementMode::feature:
    case AgreementMode::sign:
      for (Eigen::Index f : te) {
        if (std::find(tg.begin(), tg.end(), f) == tg.end()) continue;
        if (mode == AgreementMode::sign && sign_of(e[f]) != sign_of(g[f])) continue;
        ++hits;
      }
      break;
    case AgreementMode::rank:
    case AgreementMode::signed_rank:
      for (std::size_t r = 0; r < te.size(); ++r) {
        if (te[r] != tg[r]) continue;
        if (mode == AgreementMode::signed_rank && sign_of(e[te[r]]) != sign_of(g[te[r]])) continue;
        ++hits;
      }
      break;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

// Ranks of |a| in descending order (1 = most important), ties averaged.
inline Vector average_ranks(const Vector& a) {
  const auto order = importance_order(a);
  Vector ranks(a.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(a[order[j + 1]]) == std::abs(a[order[i]])) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

// Spearman correlation of the importance ranks. Undefined (NaN) when either
// vector has all magnitudes tied.
inline double rank_correlation(const Vector& e, const Vector& g) {
  check_pair(e, g);
  if (e.size() < 2) throw ConfigError("rank_correlation: need d >= 2");
  const Vector re = average_ranks(e);
  const Vector rg = average_ranks(g);
  // Doubled ranks centered at d + 1 are integers, so the sums below are exact.
  const double center = static_cast<double>(e.size() + 1);
  const Vector ce = 2.0 * re.array() - center;
  const Vector cg = 2.0 * rg.array() - center;
  const double denom = std::sqrt(ce.squaredNorm() * cg.squaredNorm());
  if (denom == 0.0) return kNaN;
  return std::clamp(ce.dot(cg) / denom, -1.0, 1.0);
}

// Fraction of feature pairs whose |.| ordering (<, >, or tie) matches.
inline double pairwise_rank_agreement(const Vector& e, const Vector& g) {
  check_pair(e, g);
  const Eigen::Index d = e.size();
  if (d < 2) throw ConfigError("pairwise_rank_agreement: need d >= 2");
  std::size_t agree = 0, total = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const int oe = sign_of(std::abs(e[i]) - std::abs(e[j]));
      const int og = sign_of(std::abs(g[i]) - std::abs(g[j]));
      agree += oe == og;
      ++total;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

// Trapezoidal area of a curve sampled at k = 1..d, normalized by (d - 1).
inline double auc_over_k(std::span<const double> curve) {
  if (curve.empty()) throw ConfigError("auc_over_k: empty curve");
  if (curve.size() == 1) return curve[0];
  std::vector<double> parts(curve.size() - 1);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) parts[i] = 0.5 * (curve[i] + curve[i + 1]);
  return pairwise_sum(parts) / static_cast<double>(curve.size() - 1);
}

inline std::vector<double> agreement_curve(const Vector& e, const Vector& g, AgreementMode mode) {
  std::vector<double> curve;
  for (Eigen::Index k = 1; k <= e.size(); ++k) curve.push_back(topk_agreement(e, g, k, mode));
  return curve;
}

}  // namespace xaibench::metrics
