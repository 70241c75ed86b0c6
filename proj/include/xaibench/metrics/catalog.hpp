#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/error.hpp"

namespace xaibench::metrics {

enum class BaseMetric { PRA, RC, FA, RA, SA, SRA, PGU, PGI, RIS, RRS, ROS };

inline constexpr std::array<BaseMetric, 11> kBaseMetrics{BaseMetric::PRA, BaseMetric::RC,  BaseMetric::FA,
                                                         BaseMetric::RA,  BaseMetric::SA,  BaseMetric::SRA,
                                                         BaseMetric::PGU, BaseMetric::PGI, BaseMetric::RIS,
                                                         BaseMetric::RRS, BaseMetric::ROS};

inline std::string_view base_name(BaseMetric m) {
  static constexpr std::array<std::string_view, 11> names{"PRA", "RC",  "FA",  "RA",  "SA", "SRA",
                                                          "PGU", "PGI", "RIS", "RRS", "ROS"};
  return names[static_cast<std::size_t>(m)];
}

inline bool needs_ground_truth(BaseMetric m) {
  return m == BaseMetric::PRA || m == BaseMetric::RC || m == BaseMetric::FA || m == BaseMetric::RA ||
         m == BaseMetric::SA || m == BaseMetric::SRA;
}

inline bool is_stability(BaseMetric m) {
  return m == BaseMetric::RIS || m == BaseMetric::RRS || m == BaseMetric::ROS;
}

// One of the 22 reported metrics: a base metric, or the subgroup disparity
// of a base metric.
struct MetricId {
  BaseMetric base = BaseMetric::PRA;
  bool disparity = false;

  std::string name() const {
    return disparity ? std::string(base_name(base)) + "_disparity" : std::string(base_name(base));
  }

  bool higher_is_better() const {
    if (disparity) return false;
    switch (base) {
      case BaseMetric::PGU:
      case BaseMetric::RIS:
      case BaseMetric::RRS:
      case BaseMetric::ROS:
        return false;
      default:
        return true;
    }
  }

  friend bool operator==(const MetricId&, const MetricId&) = default;
};

inline std::vector<MetricId> all_metrics() {
  std::vector<MetricId> out;
  for (BaseMetric b : kBaseMetrics) out.push_back({b, false});
  for (BaseMetric b : kBaseMetrics) out.push_back({b, true});
  return out;
}

inline MetricId parse_metric(std::string_view s) {
  for (const MetricId& m : all_metrics())
    if (m.name() == s) return m;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

}  // namespace xaibench::metrics
