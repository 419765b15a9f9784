#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskbound/distortion.hpp"

namespace riskbound {

struct FamilyInfo {
  std::string name;
  std::vector<std::string> params;  // required keys, in display order
  Mode mode = Mode::Entropy;
  bool weighted = false;
  std::string default_weight;  // "linear" or "unit" for weighted families
  std::string summary;
};

// All catalog families, sorted by name.
const std::vector<FamilyInfo>& families();
const FamilyInfo& family_info(std::string_view name);
bool is_family(std::string_view name);

DistortionFn catalog_lookup(const std::string& family, const ParamMap& params);

// Distortion plus the mode and extras its definition implies.
struct Problem {
  DistortionFn g;
  Mode mode;
  ModeExtras extras;
  std::optional<WeightSpec> weight;
};

Problem catalog_problem(const std::string& family, const ParamMap& params,
                        std::optional<WeightSpec> weight_override = std::nullopt);

// Building blocks; each returns a g with the given family label.
DistortionFn power_residual_g(std::string family, ParamMap params, double scale, double r);
DistortionFn power_past_g(std::string family, ParamMap params, double scale, double r);
DistortionFn log_residual_g(std::string family, ParamMap params);
DistortionFn log_past_g(std::string family, ParamMap params);
DistortionFn frac_residual_g(std::string family, ParamMap params, double alpha);
DistortionFn frac_past_g(std::string family, ParamMap params, double alpha);
DistortionFn expected_shortfall_g(double p);

std::string format_params(const ParamMap& params);

}  // namespace riskbound
