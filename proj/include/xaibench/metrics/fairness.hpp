#pragma once

#include <vector>

#include "xaibench/metrics/aggregate.hpp"

namespace xaibench::metrics {

// Mean score per protected group and their absolute difference. The majority
// is the larger group (ties: value 0). Undefined scores are skipped.
inline SubgroupSummary subgroup_disparity(const std::vector<double>& scores, const std::vector<int>& groups) {
  if (scores.size() != groups.size()) throw DimensionError("subgroup_disparity: length mismatch");
  std::vector<double> by_group[2];
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int g = groups[i];
    if (g != 0 && g != 1) throw ConfigError("subgroup_disparity: protected values must be 0 or 1");
    ++count[g];
    if (!is_undefined(scores[i])) by_group[g].push_back(scores[i]);
  }
  if (count[0] == 0 || count[1] == 0) throw ConfigError("subgroup_disparity: empty subgroup");
  SubgroupSummary s;
  s.majority_value = count[1] > count[0] ? 1 : 0;
  const int minor = 1 - s.majority_value;
  s.n_majority = count[s.majority_value];
  s.n_minority = count[minor];
  s.mean_majority = mean(by_group[s.majority_value]);
  s.mean_minority = mean(by_group[minor]);
  s.disparity = std::abs(s.mean_majority - s.mean_minority);
  return s;
}

}  // namespace xaibench::metrics
