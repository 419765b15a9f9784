#include "riskbound/report.hpp"

#include <cmath>
#include <ostream>

#include "riskbound/error.hpp"

namespace riskbound {

namespace {

std::string shortfall_params(const ShortfallSpec& s) {
  ParamMap p = s.params();
  p.erase("p");
  return format_params(p);
}

}  // namespace

Report bound_report(const std::vector<MomentSet>& moment_sets,
                       const std::vector<PremiumSpec>& premium_families,
                       const std::vector<ShortfallSpec>& shortfall_specs,
                       const std::vector<double>& kappa_grid, const std::vector<double>& p_grid) {
  if (kappa_grid.empty() && !premium_families.empty()) fail(ErrorCode::InvalidArgument, "kappa grid is empty");
  if (p_grid.empty() && !shortfall_specs.empty()) fail(ErrorCode::InvalidArgument, "p grid is empty");
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::ParamOutOfDomain, "p grid values must lie in (0,1)");
  }
  Report rep;
  for (const auto& [label, m] : moment_sets) {
    for (const PremiumSpec& f : premium_families) {
      double prev = 0.0;
      for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        const double b = premium_bound(f.family, f.params, kappa_grid[i], m);
        rep.rows.push_back({label, f.family, format_params(f.params), "kappa", kappa_grid[i], b,
                            i == 0 ? 0.0 : b - prev});
        prev = b;
      }
    }
    for (const ShortfallSpec& s : shortfall_specs) {
      double prev = 0.0;
      for (std::size_t i = 0; i < p_grid.size(); ++i) {
        ShortfallSpec at = s;
        at.p = p_grid[i];
        const double b = shortfall_bound(at, m).sup_value;
        rep.rows.push_back({label, s.family, shortfall_params(s), "p", p_grid[i], b,
                            i == 0 ? 0.0 : b - prev});
        prev = b;
      }
    }
  }
  return rep;
}

void write_report_csv(std::ostream& os, const Report& report) {
  os << "label,family,params,grid_var,grid_value,bound\n";
  for (const ReportRow& r : report.rows) {
    os << r.label << ',' << r.family << ',' << r.params << ',' << r.grid_var << ','
       << format_double(r.grid_value) << ',' << format_double(r.bound) << '\n';
  }
}

std::vector<MomentSet> stock_moments() {
  return {{"CSCO", {0.04371627, std::sqrt(0.191021554), false}},
          {"AAPL", {0.123873016, std::sqrt(3.204667195), false}},
          {"EBAY", {0.021860317, std::sqrt(0.39813437), false}}};
}

std::vector<PremiumSpec> default_premium_families() {
  return {{"BGini", {}},
          {"BCE", {}},
          {"BCT", {{"alpha", 2.0 / 3.0}}},
          {"BCT", {{"alpha", 3.0}}},
          {"BEGini", {{"r", 1.5}}},
          {"BEGini", {{"r", 3.0}}}};
}

std::vector<ShortfallSpec> default_shortfalls(double tau) {
  std::vector<ShortfallSpec> out(5);
  out[0].family = "GS";
  out[1].family = "CRES";
  out[2].family = "CRTES";
  out[2].alpha = 2.0 / 3.0;
  out[3].family = "CRTES";
  out[3].alpha = 3.0;
  out[4].family = "EGS";
  out[4].r = 3.0;
  for (auto& s : out) {
    s.p = 0.9;
    s.tau = tau;
  }
  return out;
}

std::vector<double> linear_grid(double a, double b, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (n == 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

}  // namespace riskbound
