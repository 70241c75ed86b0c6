#pragma once

#include <optional>
#include <vector>

#include "xaibench/numeric.hpp"

namespace xaibench::metrics {

struct SubgroupSummary {
  double mean_majority = kNaN;
  double mean_minority = kNaN;
  double disparity = kNaN;
  std::size_t n_majority = 0;
  std::size_t n_minority = 0;
  int majority_value = 0;
};

struct MetricResult {
  std::vector<double> per_instance;  // NaN marks an undefined instance
  double mean = kNaN;
  double std_error = kNaN;
  std::size_t n = 0;            // defined instances
  std::size_t n_undefined = 0;  // excluded instances
  std::optional<SubgroupSummary> subgroups;

  bool defined() const { return n > 0; }
};

// Mean and standard error (sample std / sqrt(n)) over the defined entries.
inline MetricResult aggregate(std::vector<double> scores) {
  if (scores.empty()) throw ConfigError("aggregate: no scores");
  MetricResult r;
  std::vector<double> defined;
  for (double s : scores) {
    if (is_undefined(s)) ++r.n_undefined;
    else defined.push_back(s);
  }
  r.n = defined.size();
  if (r.n > 0) {
    r.mean = mean(defined);
    r.std_error = sample_stddev(defined) / std::sqrt(static_cast<double>(r.n));
  }
  r.per_instance = std::move(scores);
  return r;
}

}  // namespace xaibench::metrics
