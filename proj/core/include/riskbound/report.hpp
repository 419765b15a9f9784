#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "riskbound/bounds.hpp"

namespace riskbound {

struct PremiumSpec {
  std::string family;  // premium name, e.g. "BGini" or "BCT"
  ParamMap params;
};

struct ReportRow {
  std::string label;
  std::string family;
  std::string params;
  std::string grid_var;  // "kappa" or "p"
  double grid_value = 0.0;
  double bound = 0.0;
  double increment = 0.0;  // bound minus the previous grid point's; 0 on the first
};

struct Report {
  std::vector<ReportRow> rows;
};

using MomentSet = std::pair<std::string, MomentInfo>;

Report bound_report(const std::vector<MomentSet>& moment_sets,
                       const std::vector<PremiumSpec>& premium_families,
                       const std::vector<ShortfallSpec>& shortfall_specs,
                       const std::vector<double>& kappa_grid, const std::vector<double>& p_grid);

// Columns label, family, params, grid_var, grid_value, bound.
void write_report_csv(std::ostream& os, const Report& report);

// Stated moments of the three return series (variance converted to sigma).
std::vector<MomentSet> stock_moments();
std::vector<PremiumSpec> default_premium_families();
std::vector<ShortfallSpec> default_shortfalls(double tau = 0.5);

// n points from a to b inclusive.
std::vector<double> linear_grid(double a, double b, int n);

}  // namespace riskbound
