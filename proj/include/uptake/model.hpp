#pragma once

#include <map>
#include <string>

namespace uptake {

/// Logistic-regression parameters. Only finite values are valid.
struct ModelParams {
  std::map<std::string, double, std::less<>> weights;
  double bias = 0.0;
  double lambda = 0.0;

  bool operator==(const ModelParams&) const = default;
};

}  // namespace uptake
