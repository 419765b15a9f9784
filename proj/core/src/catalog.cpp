#include "riskbound/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "riskbound/error.hpp"

namespace riskbound {

namespace {

std::vector<FamilyInfo> build_table() {
  const Mode E = Mode::Entropy;
  const Mode R = Mode::Residual;
  const Mode P = Mode::Past;
  const Mode S = Mode::Shortfall;
  std::vector<FamilyInfo> t = {
      {"CT", {"alpha"}, E, false, "", "cumulative Tsallis past entropy"},
      {"GiniSemidiff", {}, E, false, "", "Gini mean semi-difference"},
      {"CRT", {"alpha"}, E, false, "", "cumulative residual Tsallis entropy"},
      {"EGini", {"r"}, E, false, "", "extended Gini"},
      {"Gini", {}, E, false, "", "Gini mean difference (extended Gini, r = 2)"},
      {"FGRE", {"alpha"}, E, false, "", "fractional generalized cumulative residual entropy"},
      {"GCRE", {"n"}, E, false, "", "generalized cumulative residual entropy"},
      {"CRE", {}, E, false, "", "cumulative residual entropy"},
      {"FGE", {"alpha"}, E, false, "", "fractional generalized cumulative entropy"},
      {"GCE", {"n"}, E, false, "", "generalized cumulative entropy"},
      {"CE", {}, E, false, "", "cumulative entropy"},
      {"DCRT", {"alpha", "Ft"}, R, false, "", "dynamic cumulative residual Tsallis entropy"},
      {"TCRTE", {"alpha", "p"}, R, false, "", "tail-based cumulative residual Tsallis entropy"},
      {"TNGini", {"p"}, R, false, "", "tail-based normalized Gini (TCRTE, alpha = 2)"},
      {"TCRE", {"p"}, R, false, "", "tail-based cumulative residual entropy"},
      {"TNEGini", {"r", "p"}, R, false, "", "tail-based normalized extended Gini"},
      {"TEGini", {"r", "p"}, R, false, "", "tail-based extended Gini"},
      {"TGini", {"p"}, R, false, "", "tail-based Gini (TNEGini, r = 2)"},
      {"DCT", {"alpha", "Ft"}, P, false, "", "dynamic cumulative Tsallis past entropy"},
      {"DGini", {"Ft"}, P, false, "", "dynamic Gini semi-difference (DCT, alpha = 2)"},
      {"DCE", {"Ft"}, P, false, "", "dynamic cumulative past entropy"},
      {"WCT", {"alpha"}, E, true, "linear", "weighted cumulative Tsallis past entropy"},
      {"WGini", {}, E, true, "linear", "weighted Gini semi-difference (WCT, alpha = 2)"},
      {"WCRT", {"alpha"}, E, true, "linear", "weighted cumulative residual Tsallis entropy"},
      {"WGCRE", {}, E, true, "unit", "weighted cumulative residual entropy, weight psi"},
      {"WCRE", {}, E, true, "linear", "weighted cumulative residual entropy, psi(x) = x"},
      {"WGCE", {}, E, true, "unit", "weighted cumulative entropy, weight psi"},
      {"WCE", {}, E, true, "linear", "weighted cumulative entropy, psi(x) = x"},
      {"DWGCRE", {"Ft"}, R, true, "unit", "dynamic weighted cumulative residual entropy, weight psi"},
      {"DWCRE", {"Ft"}, R, true, "linear", "dynamic weighted cumulative residual entropy, psi(x) = x"},
      {"DWGCE", {"Ft"}, P, true, "unit", "dynamic weighted cumulative past entropy, weight psi"},
      {"DWCE", {"Ft"}, P, true, "linear", "dynamic weighted cumulative past entropy, psi(x) = x"},
      {"ES", {"p"}, Mode::Riskmetric, false, "", "expected shortfall"},
      {"GS", {"p", "tau"}, S, false, "", "Gini shortfall"},
      {"EGS", {"r", "p", "tau"}, S, false, "", "extended Gini shortfall"},
      {"CRES", {"p", "tau"}, S, false, "", "cumulative residual entropy shortfall"},
      {"CRTES", {"alpha", "p", "tau"}, S, false, "", "cumulative residual Tsallis entropy shortfall"},
  };
  std::sort(t.begin(), t.end(),
            [](const FamilyInfo& a, const FamilyInfo& b) { return a.name < b.name; });
  return t;
}

std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

[[noreturn]] void out_of_domain(const std::string& family, const std::string& what) {
  fail(ErrorCode::ParamOutOfDomain, family + ": " + what);
}

void check_tsallis_alpha(const std::string& f, double a) {
  if (!(a > 0.0) || a == 1.0) out_of_domain(f, "alpha must satisfy alpha > 0 and alpha != 1, got " + num(a));
}

void check_r(const std::string& f, double r) {
  if (!(r > 1.0)) out_of_domain(f, "r must satisfy r > 1, got " + num(r));
}

void check_p(const std::string& f, double p) {
  if (!(p > 0.0 && p < 1.0)) out_of_domain(f, "p must lie in (0,1), got " + num(p));
}

void check_residual_ft(const std::string& f, double ft) {
  if (!(ft >= 0.0 && ft < 1.0)) {
    fail(ErrorCode::BadTruncationPoint, f + ": Ft must lie in [0,1), got " + num(ft));
  }
}

void check_past_ft(const std::string& f, double ft) {
  if (!(ft > 0.0 && ft <= 1.0)) {
    fail(ErrorCode::BadTruncationPoint, f + ": Ft must lie in (0,1], got " + num(ft));
  }
}

void check_tau(const std::string& f, double tau, double hi, const std::string& hi_text) {
  if (!(tau >= 0.0 && tau <= hi * (1.0 + 1e-12))) {
    out_of_domain(f, "tau must lie in [0, " + hi_text + "], got " + num(tau));
  }
}

void check_keys(const FamilyInfo& info, const ParamMap& params,
                const std::vector<std::string>& optional = {}) {
  for (const auto& key : info.params) {
    if (!params.count(key)) out_of_domain(info.name, "missing parameter '" + key + "'");
  }
  for (const auto& [key, value] : params) {
    const bool known = std::find(info.params.begin(), info.params.end(), key) != info.params.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) out_of_domain(info.name, "unknown parameter '" + key + "'");
    if (!std::isfinite(value)) out_of_domain(info.name, "parameter '" + key + "' is not finite");
  }
}

double tgamma_checked(double x) {
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) fail(ErrorCode::ParamOutOfDomain, "Gamma overflow at " + num(x));
  return g;
}

}  // namespace

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> table = build_table();
  return table;
}

bool is_family(std::string_view name) {
  const auto& t = families();
  return std::any_of(t.begin(), t.end(), [&](const FamilyInfo& f) { return f.name == name; });
}

const FamilyInfo& family_info(std::string_view name) {
  for (const auto& f : families()) {
    if (f.name == name) return f;
  }
  fail(ErrorCode::UnknownFamily, "unknown family '" + std::string(name) + "'");
}

std::string format_params(const ParamMap& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + num(v);
  }
  return out;
}

DistortionFn power_residual_g(std::string family, ParamMap params, double c, double r) {
  auto g = [c, r](UnitPoint s) {
    if (s.u <= 0.0) return 0.0;
    // s - s^r = s (1 - s^(r-1)), kept accurate near s = 1.
    return c * s.u * -std::expm1((r - 1.0) * log_u(s));
  };
  auto gp = [c, r](UnitPoint s) { return c * (1.0 - r * std::exp((r - 1.0) * log_u(s))); };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::PowerResidual, c, r});
}

DistortionFn power_past_g(std::string family, ParamMap params, double c, double r) {
  auto g = [c, r](UnitPoint s) {
    if (s.v <= 0.0) return 0.0;
    return c * s.v * -std::expm1((r - 1.0) * log_v(s));
  };
  auto gp = [c, r](UnitPoint s) { return c * (r * std::exp((r - 1.0) * log_v(s)) - 1.0); };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::PowerPast, c, r});
}

DistortionFn log_residual_g(std::string family, ParamMap params) {
  auto g = [](UnitPoint s) {
    if (s.u <= 0.0 || s.v <= 0.0) return 0.0;
    return -s.u * log_u(s);
  };
  auto gp = [](UnitPoint s) { return -log_u(s) - 1.0; };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::LogResidual, 1.0, 1.0});
}

DistortionFn log_past_g(std::string family, ParamMap params) {
  auto g = [](UnitPoint s) {
    if (s.u <= 0.0 || s.v <= 0.0) return 0.0;
    return -s.v * log_v(s);
  };
  auto gp = [](UnitPoint s) { return log_v(s) + 1.0; };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::LogPast, 1.0, 1.0});
}

DistortionFn frac_residual_g(std::string family, ParamMap params, double a) {
  const double k = 1.0 / tgamma_checked(a + 1.0);
  auto g = [a, k](UnitPoint s) {
    if (s.u <= 0.0 || s.v <= 0.0) return 0.0;
    return k * s.u * std::pow(-log_u(s), a);
  };
  auto gp = [a, k](UnitPoint s) {
    const double l = -log_u(s);
    return k * (std::pow(l, a) - a * std::pow(l, a - 1.0));
  };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::FracResidual, 1.0, a});
}

DistortionFn frac_past_g(std::string family, ParamMap params, double a) {
  const double k = 1.0 / tgamma_checked(a + 1.0);
  auto g = [a, k](UnitPoint s) {
    if (s.u <= 0.0 || s.v <= 0.0) return 0.0;
    return k * s.v * std::pow(-log_v(s), a);
  };
  auto gp = [a, k](UnitPoint s) {
    const double l = -log_v(s);
    return -k * (std::pow(l, a) - a * std::pow(l, a - 1.0));
  };
  return DistortionFn(std::move(family), std::move(params), g, gp, Continuity::Continuous,
                      {Kernel::Kind::FracPast, 1.0, a});
}

DistortionFn expected_shortfall_g(double p) {
  const double w = 1.0 - p;
  auto g = [p, w](UnitPoint s) { return s.v > p ? s.u / w : 1.0; };
  auto gp = [p, w](UnitPoint s) { return s.v > p ? 1.0 / w : 0.0; };
  return DistortionFn("ES", {{"p", p}}, g, gp, Continuity::Continuous,
                      {Kernel::Kind::ExpectedShortfall, 1.0, p}, {}, {w});
}

DistortionFn catalog_lookup(const std::string& family, const ParamMap& params) {
  const FamilyInfo& info = family_info(family);
  const std::string& f = info.name;
  check_keys(info, params, f == "ES" ? std::vector<std::string>{"tau"} : std::vector<std::string>{});
  auto get = [&](const char* key) { return params.at(key); };

  if (f == "CT" || f == "WCT" || f == "DCT") {
    const double a = get("alpha");
    check_tsallis_alpha(f, a);
    if (f == "DCT") check_past_ft(f, get("Ft"));
    return power_past_g(f, params, 1.0 / (a - 1.0), a);
  }
  if (f == "GiniSemidiff" || f == "WGini") return power_past_g(f, params, 1.0, 2.0);
  if (f == "DGini") {
    check_past_ft(f, get("Ft"));
    return power_past_g(f, params, 1.0, 2.0);
  }
  if (f == "CRT" || f == "WCRT" || f == "DCRT" || f == "TCRTE") {
    const double a = get("alpha");
    check_tsallis_alpha(f, a);
    if (f == "DCRT") check_residual_ft(f, get("Ft"));
    if (f == "TCRTE") check_p(f, get("p"));
    return power_residual_g(f, params, 1.0 / (a - 1.0), a);
  }
  if (f == "EGini" || f == "TNEGini") {
    const double r = get("r");
    check_r(f, r);
    if (f == "TNEGini") check_p(f, get("p"));
    return power_residual_g(f, params, 2.0, r);
  }
  if (f == "Gini") return power_residual_g(f, params, 2.0, 2.0);
  if (f == "TGini") {
    check_p(f, get("p"));
    return power_residual_g(f, params, 2.0, 2.0);
  }
  if (f == "TNGini") {
    check_p(f, get("p"));
    return power_residual_g(f, params, 1.0, 2.0);
  }
  if (f == "TEGini") {
    const double r = get("r");
    const double p = get("p");
    check_r(f, r);
    check_p(f, p);
    return power_residual_g(f, params, 2.0 * std::pow(1.0 - p, r - 2.0), r);
  }
  if (f == "FGRE" || f == "FGE") {
    const double a = get("alpha");
    if (!(a > 0.0)) out_of_domain(f, "alpha must be positive, got " + num(a));
    return f == "FGRE" ? frac_residual_g(f, params, a) : frac_past_g(f, params, a);
  }
  if (f == "GCRE" || f == "GCE") {
    const double n = get("n");
    if (!(n >= 1.0) || n != std::floor(n)) {
      out_of_domain(f, "n must be a positive integer, got " + num(n));
    }
    return f == "GCRE" ? frac_residual_g(f, params, n) : frac_past_g(f, params, n);
  }
  if (f == "CRE" || f == "WCRE" || f == "WGCRE") return log_residual_g(f, params);
  if (f == "TCRE") {
    check_p(f, get("p"));
    return log_residual_g(f, params);
  }
  if (f == "DWCRE" || f == "DWGCRE") {
    check_residual_ft(f, get("Ft"));
    return log_residual_g(f, params);
  }
  if (f == "CE" || f == "WCE" || f == "WGCE") return log_past_g(f, params);
  if (f == "DCE" || f == "DWCE" || f == "DWGCE") {
    check_past_ft(f, get("Ft"));
    return log_past_g(f, params);
  }
  if (f == "ES") {
    check_p(f, get("p"));
    if (params.count("tau") && params.at("tau") != 0.0) {
      out_of_domain(f, "tau must be 0 for ES, got " + num(params.at("tau")));
    }
    return expected_shortfall_g(get("p"));
  }
  if (f == "GS") {
    const double p = get("p");
    check_p(f, p);
    check_tau(f, get("tau"), 0.5, "1/2");
    return power_residual_g(f, params, 2.0, 2.0);
  }
  if (f == "EGS") {
    const double r = get("r");
    const double p = get("p");
    check_r(f, r);
    check_p(f, p);
    const double hi = 1.0 / (2.0 * (r - 1.0) * std::pow(1.0 - p, r - 2.0));
    check_tau(f, get("tau"), hi, "1/(2(r-1)(1-p)^(r-2)) = " + num(hi));
    return power_residual_g(f, params, 2.0 * std::pow(1.0 - p, r - 2.0), r);
  }
  if (f == "CRES") {
    check_p(f, get("p"));
    check_tau(f, get("tau"), 1.0, "1");
    return log_residual_g(f, params);
  }
  if (f == "CRTES") {
    const double a = get("alpha");
    check_tsallis_alpha(f, a);
    if (!(a > 0.5)) out_of_domain(f, "alpha must exceed 1/2, got " + num(a));
    check_p(f, get("p"));
    check_tau(f, get("tau"), 1.0, "1");
    return power_residual_g(f, params, 1.0 / (a - 1.0), a);
  }
  fail(ErrorCode::UnknownFamily, "unknown family '" + family + "'");
}

Problem catalog_problem(const std::string& family, const ParamMap& params,
                        std::optional<WeightSpec> weight_override) {
  const FamilyInfo& info = family_info(family);
  DistortionFn g = catalog_lookup(family, params);
  ModeExtras extras;
  switch (info.mode) {
    case Mode::Residual:
      extras.truncation = params.count("Ft") ? params.at("Ft") : params.at("p");
      break;
    case Mode::Past:
      extras.truncation = params.at("Ft");
      break;
    case Mode::Shortfall:
      extras.p = params.at("p");
      extras.tau = params.at("tau");
      break;
    case Mode::Riskmetric:
    case Mode::Entropy:
      break;
  }
  std::optional<WeightSpec> weight;
  if (info.weighted) {
    weight = weight_override ? *weight_override : weight_by_name(info.default_weight);
  } else if (weight_override) {
    fail(ErrorCode::InvalidArgument, family + " is not a weighted family");
  }
  return {std::move(g), info.mode, extras, std::move(weight)};
}

}  // namespace riskbound
