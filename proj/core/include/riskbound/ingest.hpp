#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskbound/bounds.hpp"

namespace riskbound {

struct ReturnSeries {
  std::string label;
  std::vector<double> values;
  std::vector<std::string> dates;  // empty unless the file has a "date" column
  std::size_t skipped = 0;         // rows with an empty cell in the selected column
};

// `column` is a header name, or a zero-based index when no header matches.
ReturnSeries load_returns_csv(const std::string& path, const std::string& column);

enum class Estimator { Population, Sample };

Estimator parse_estimator(const std::string& name);
MomentInfo sample_moments(const ReturnSeries& series, Estimator estimator = Estimator::Population);

// Simple returns in percent: (P_t - P_{t-1}) / P_{t-1} * 100.
std::vector<double> prices_to_returns(const std::vector<double>& prices);

}  // namespace riskbound
