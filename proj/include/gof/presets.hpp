#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gof/calibration.hpp"

namespace gof {

// Published reference values a preset run is compared against. The quantile
// rows were produced by simulation at M = 1e6, so they carry Monte-Carlo
// noise on that scale (visible mostly in the 0.99 column).
struct CaseReference {
  double mean_x2 = 0.0;
  double var_x2 = 0.0;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::array<double, 4> statistic_quantiles{};  // at p = .75, .9, .95, .99
  std::optional<std::array<double, 4>> gamma_quantiles;
};

struct CasePreset {
  std::string id;
  std::string description;
  CalibrationConfig config;  // trials defaults to 1e6, seed to 42
  CaseReference reference;
};

const std::vector<CasePreset>& builtin_cases();
const CasePreset* find_case(std::string_view id);

}  // namespace gof
