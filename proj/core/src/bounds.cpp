#include "riskbound/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include "json.hpp"
#include <sstream>

#include "riskbound/error.hpp"

namespace riskbound {

namespace {

constexpr double kDegenerateNorm = 1e-12;
constexpr double kMaxShortfallLevel = 1.0 - 1e-6;

double center_scale_of(const DistortionFn& g, Mode mode) {
  switch (mode) {
    case Mode::Riskmetric:
      return g.g1();
    case Mode::Shortfall:
      return 1.0;
    default:
      return 0.0;
  }
}

std::vector<double> interior_knots(const PiecewiseEnvelope& env) {
  std::vector<double> out;
  for (double k : env.knots()) {
    if (k > 0.0 && k < 1.0) out.push_back(k);
  }
  return out;
}

}  // namespace

void MomentInfo::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma)) {
    fail(ErrorCode::NonFiniteValue, "moments must be finite");
  }
  if (sigma < 0.0) fail(ErrorCode::ParamOutOfDomain, "sigma must be >= 0, got " + format_double(sigma));
}

BoundResult worst_case_bound(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                             const MomentInfo& moments, const BoundOptions& opts) {
  moments.validate();
  BoundResult r;
  ModeExtras ex = extras;
  if (mode == Mode::Shortfall && ex.p > kMaxShortfallLevel) {
    ex.p = kMaxShortfallLevel;
    r.p_capped = true;
  }
  const TransformedGHat ghat = make_ghat(g, mode, ex);

  std::shared_ptr<const PiecewiseEnvelope> env;
  if (opts.prefer_analytic && has_analytic_envelope(ghat)) {
    env = std::make_shared<const PiecewiseEnvelope>(convex_envelope_analytic(ghat));
  } else {
    const int n = opts.n_grid > 0 ? opts.n_grid : default_grid_size();
    env = std::make_shared<const PiecewiseEnvelope>(convex_envelope_numeric(ghat, n));
  }

  r.family = g.family();
  r.params = g.params();
  r.mode = mode;
  r.mu = moments.mu;
  r.sigma = moments.sigma;
  r.center = ghat.center();
  r.center_scale = center_scale_of(g, mode);
  r.l2_term = slope_l2_norm(*env, r.center);
  r.sup_value = r.mu * r.center_scale + r.sigma * r.l2_term;
  r.degenerate = r.l2_term < kDegenerateNorm;
  r.jump_chord = env->jump_chord();
  r.envelope = env;
  r.knots = interior_knots(*env);

  if (!r.degenerate) {
    const double mu = r.mu;
    const double scale = r.sigma / r.l2_term;
    const double c = r.center;
    r.quantile = QuantileFn::analytic_probed(
        [env, mu, scale, c](UnitPoint x) { return mu + scale * (env->slope(x) - c); }, r.knots);
    r.quantile_left = [env, mu, scale, c](UnitPoint x) {
      return mu + scale * (env->slope_left(x) - c);
    };
  }
  return r;
}

BoundResult worst_case_weighted(const DistortionFn& g, const WeightSpec& w,
                                const MomentInfo& moments, Mode mode, const ModeExtras& extras,
                                const BoundOptions& opts) {
  if (std::abs(g.g1()) > 1e-12) {
    fail(ErrorCode::ModeContractViolation, "weighted entropy requires g(1) = 0");
  }
  MomentInfo m = moments;
  m.weighted = true;
  BoundResult r = worst_case_bound(g, mode, extras, m, opts);
  r.weighted = true;
  if (!r.quantile) return r;

  r.weighted_quantile = r.quantile;
  r.quantile.reset();
  if (!w.invertible()) {
    r.quantile_left = {};
    return r;
  }
  const QuantileFn wq = *r.weighted_quantile;
  // Psi^-1 is only defined above Psi(domain_lo); the smallest value of the
  // weighted quantile is its limit at u = 0.
  const double floor = w.Psi(w.domain_lo);
  if (!(wq.eval(unit(0.0)) >= floor)) {
    r.quantile_left = {};
    return r;
  }
  const auto inv = w.Psi_inverse;
  r.quantile = QuantileFn::analytic_probed([wq, inv](UnitPoint x) { return inv(wq.eval(x)); },
                                           wq.breakpoints());
  const UnitFn left = r.quantile_left;
  r.quantile_left = [left, inv](UnitPoint x) { return inv(left(x)); };
  return r;
}

BoundResult family_bound(const std::string& family, const ParamMap& params,
                         const MomentInfo& moments, const BoundOptions& opts,
                         std::optional<WeightSpec> weight) {
  Problem prob = catalog_problem(family, params, std::move(weight));
  if (prob.weight) {
    return worst_case_weighted(prob.g, *prob.weight, moments, prob.mode, prob.extras, opts);
  }
  return worst_case_bound(prob.g, prob.mode, prob.extras, moments, opts);
}

std::string premium_base_family(const std::string& family) {
  if (family == "BE") return "CRE";
  if (is_family(family)) return family;
  if (family.size() > 1 && family[0] == 'B' && is_family(family.substr(1))) return family.substr(1);
  fail(ErrorCode::UnknownFamily, "unknown premium family '" + family + "'");
}

double premium_bound(const std::string& family, const ParamMap& params, double kappa,
                     const MomentInfo& m) {
  m.validate();
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    fail(ErrorCode::ParamOutOfDomain, "kappa must be >= 0, got " + format_double(kappa));
  }
  const std::string base = premium_base_family(family);
  const ClosedForm cf = closed_form(base, params);
  if (cf.center_scale != 0.0) {
    fail(ErrorCode::InvalidArgument, base + " is not an entropy; premium loading needs a variability measure");
  }
  return m.mu + kappa * m.sigma * cf.coefficient;
}

ParamMap ShortfallSpec::params() const {
  if (family == "GS" || family == "CRES") return {{"p", p}, {"tau", tau}};
  if (family == "EGS") return {{"p", p}, {"r", r}, {"tau", tau}};
  if (family == "CRTES") return {{"alpha", alpha}, {"p", p}, {"tau", tau}};
  if (family == "ES") {
    if (tau != 0.0) return {{"p", p}, {"tau", tau}};
    return {{"p", p}};
  }
  return {{"p", p}, {"tau", tau}};
}

namespace {

// Upper branch of the closed-form worst-case quantile on [p, 1], at
// mean 0 and unit standard deviation.
UnitFn shortfall_upper(const ShortfallSpec& s) {
  const double p = s.p;
  const double t = s.tau;
  if (s.family == "ES") {
    const double v = std::sqrt(p / (1.0 - p));
    return [v](UnitPoint) { return v; };
  }
  if (s.family == "GS") {
    const double k = std::sqrt(3.0) / (std::pow(1.0 - p, 1.5) * std::sqrt(3.0 * p + 4.0 * t * t));
    return [p, t, k](UnitPoint x) { return k * (p * (1.0 - p) + 4.0 * t * (x.u - 0.5 * (1.0 + p))); };
  }
  if (s.family == "EGS") {
    const double r = s.r;
    const double den = (2.0 * r - 1.0) * p +
                       4.0 * t * t * std::pow(1.0 - p, 2.0 * r - 4.0) * (r - 1.0) * (r - 1.0);
    const double k = std::sqrt(2.0 * r - 1.0) / (std::pow(1.0 - p, 1.5) * std::sqrt(den));
    return [p, t, r, k](UnitPoint x) {
      return k * (p * (1.0 - p) +
                  2.0 * t * (std::pow(1.0 - p, r - 1.0) - r * std::pow(x.v, r - 1.0)));
    };
  }
  if (s.family == "CRES") {
    const double k = 1.0 / std::sqrt((1.0 - p) * (p + t * t));
    return [p, t, k](UnitPoint x) {
      if (x.v <= 0.0) return std::numeric_limits<double>::infinity();
      return k * ((p - t) - t * (std::log(x.v) - std::log1p(-p)));
    };
  }
  // CRTES
  const double a = s.alpha;
  const double k = std::sqrt(2.0 * a - 1.0) / std::sqrt((1.0 - p) * ((2.0 * a - 1.0) * p + t * t));
  return [p, t, a, k](UnitPoint x) {
    const double sv = x.v / (1.0 - p);
    return k * (p + t / (a - 1.0) * (1.0 - a * std::pow(sv, a - 1.0)));
  };
}

double shortfall_lower(const ShortfallSpec& s) {
  const double p = s.p;
  const double t = s.tau;
  if (s.family == "ES") return -std::sqrt((1.0 - p) / p);
  if (s.family == "GS") return -std::sqrt(3.0 * (1.0 - p) / (3.0 * p + 4.0 * t * t));
  if (s.family == "EGS") {
    const double r = s.r;
    const double den = (2.0 * r - 1.0) * p +
                       4.0 * t * t * std::pow(1.0 - p, 2.0 * r - 4.0) * (r - 1.0) * (r - 1.0);
    return -std::sqrt((2.0 * r - 1.0) * (1.0 - p) / den);
  }
  if (s.family == "CRES") return -std::sqrt((1.0 - p) / (p + t * t));
  const double a = s.alpha;
  return -std::sqrt((2.0 * a - 1.0) * (1.0 - p) / ((2.0 * a - 1.0) * p + t * t));
}

}  // namespace

BoundResult shortfall_bound(const ShortfallSpec& spec, const MomentInfo& m, const BoundOptions& opts) {
  m.validate();
  ShortfallSpec s = spec;
  bool capped = false;
  if (s.p > kMaxShortfallLevel && s.p < 1.0) {
    s.p = kMaxShortfallLevel;
    capped = true;
  }
  if (s.family == "custom") {
    if (!s.custom_g) fail(ErrorCode::InvalidArgument, "custom shortfall needs a distortion");
    BoundResult r = worst_case_bound(*s.custom_g, Mode::Shortfall, ModeExtras::shortfall(s.p, s.tau), m, opts);
    r.p_capped = r.p_capped || capped;
    return r;
  }
  if (s.family != "ES" && s.family != "GS" && s.family != "EGS" && s.family != "CRES" &&
      s.family != "CRTES") {
    fail(ErrorCode::UnknownFamily, "unknown shortfall family '" + s.family + "'");
  }
  const ParamMap params = s.params();
  BoundResult r = family_bound(s.family, params, m, opts);
  const ClosedForm cf = closed_form(s.family, params);
  r.p_capped = capped;
  r.center_scale = cf.center_scale;
  r.l2_term = cf.coefficient;
  r.sup_value = m.mu * cf.center_scale + m.sigma * cf.coefficient;
  r.degenerate = false;

  const UnitFn upper = shortfall_upper(s);
  const double lower = shortfall_lower(s);
  const double p = s.p;
  const double mu = m.mu;
  const double sigma = m.sigma;
  r.quantile = QuantileFn::analytic_probed(
      [=](UnitPoint x) { return mu + sigma * (x.u < p ? lower : upper(x)); }, {p});
  r.quantile_left = [=](UnitPoint x) { return mu + sigma * (x.u <= p ? lower : upper(x)); };
  r.knots = {p};
  return r;
}

double worst_case_quantile(const BoundResult& result, double u) {
  if (result.degenerate) fail(ErrorCode::DegenerateResult, "the worst case is degenerate");
  if (!(u > 0.0 && u < 1.0)) fail(ErrorCode::DomainError, "u must lie in (0,1), got " + format_double(u));
  if (!result.quantile) {
    if (result.weighted) {
      fail(ErrorCode::NonInvertibleWeight,
           "the weighted worst case cannot be mapped back through Psi^-1");
    }
    fail(ErrorCode::DegenerateResult, "no worst-case quantile");
  }
  return (*result.quantile)(u);
}

QuantileSample quantile_grid(const BoundResult& result) {
  if (result.degenerate) fail(ErrorCode::DegenerateResult, "the worst case is degenerate");
  if (!result.quantile) {
    fail(ErrorCode::NonInvertibleWeight, "the weighted worst case cannot be mapped back through Psi^-1");
  }
  return sample_quantile(*result.quantile, result.knots, result.quantile_left);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string bound_record_csv_header() { return "family,params,mu,sigma,sup,l2_term,degenerate"; }

std::string bound_record_csv_row(const BoundResult& r) {
  std::ostringstream os;
  os << csv_field(r.family) << ',' << csv_field(format_params(r.params)) << ','
     << format_double(r.mu) << ',' << format_double(r.sigma) << ',' << format_double(r.sup_value)
     << ',' << format_double(r.l2_term) << ',' << (r.degenerate ? "true" : "false");
  return os.str();
}

std::string bound_record_json(const BoundResult& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["mode"] = std::string(mode_name(r.mode));
  j["mu"] = r.mu;
  j["sigma"] = r.sigma;
  j["sup"] = r.sup_value;
  j["l2_term"] = r.l2_term;
  j["center"] = r.center;
  j["degenerate"] = r.degenerate;
  j["weighted"] = r.weighted;
  if (r.jump_chord) j["jump_chord"] = true;
  if (r.p_capped) j["p_capped"] = true;
  return j.dump();
}

}  // namespace riskbound
