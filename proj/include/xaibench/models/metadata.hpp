#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace xaibench::models {

struct TrainMetadata {
  std::string dataset;
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;
  int batch_size = 0;
  std::optional<double> test_accuracy;
};

}  // namespace xaibench::models
