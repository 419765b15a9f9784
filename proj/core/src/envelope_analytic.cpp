#include <cmath>
#include <limits>
#include <string>

#include "riskbound/envelope.hpp"
#include "riskbound/error.hpp"
#include "riskbound/numerics.hpp"

namespace riskbound {

namespace {

double need(const ParamMap& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) {
    fail(ErrorCode::ParamOutOfDomain, std::string("breakpoint equation needs parameter '") + key + "'");
  }
  return it->second;
}

const double kBelowOne = std::nextafter(1.0, 0.0);
const double kTiny = 1e-300;

}  // namespace

double breakpoint_residual(BreakpointEquation eq, const ParamMap& params, double u) {
  switch (eq) {
    case BreakpointEquation::FGRE: {
      const double a = need(params, "alpha");
      return a * u + std::log1p(-u);
    }
    case BreakpointEquation::FGE: {
      const double a = need(params, "alpha");
      return a * (1.0 - u) + std::log(u);
    }
    case BreakpointEquation::TCRTE: {
      const double a = need(params, "alpha");
      const double p = need(params, "p");
      return std::pow(1.0 - p, a - 1.0) - std::pow(1.0 - u, a - 1.0) * (1.0 + (a - 1.0) * u);
    }
    case BreakpointEquation::TCRE: {
      const double p = need(params, "p");
      return u + std::log1p(-u) - std::log1p(-p);
    }
    case BreakpointEquation::TNEGini: {
      const double r = need(params, "r");
      const double p = need(params, "p");
      return std::pow(1.0 - u, r) + r * u * std::pow(1.0 - u, r - 1.0) - std::pow(1.0 - p, r - 1.0);
    }
    case BreakpointEquation::DCT: {
      const double a = need(params, "alpha");
      const double ft = need(params, "Ft");
      return std::pow(ft, a - 1.0) - std::pow(u, a - 1.0) * (u + a * (1.0 - u));
    }
    case BreakpointEquation::DCE: {
      const double ft = need(params, "Ft");
      return u - 1.0 - std::log(u / ft);
    }
  }
  return 0.0;
}

double solve_breakpoint(BreakpointEquation eq, const ParamMap& params) {
  auto f = [&](double u) { return breakpoint_residual(eq, params, u); };
  double lo = 0.0;
  double hi = 1.0;
  switch (eq) {
    case BreakpointEquation::FGRE: {
      const double a = need(params, "alpha");
      if (!(a > 1.0)) fail(ErrorCode::NoSignChange, "FGRE contact equation needs alpha > 1");
      lo = -std::expm1(1.0 - a);
      hi = kBelowOne;
      break;
    }
    case BreakpointEquation::FGE: {
      const double a = need(params, "alpha");
      if (!(a > 1.0)) fail(ErrorCode::NoSignChange, "FGE contact equation needs alpha > 1");
      lo = kTiny;
      hi = std::exp(1.0 - a);
      break;
    }
    case BreakpointEquation::TCRTE:
    case BreakpointEquation::TCRE:
    case BreakpointEquation::TNEGini: {
      const double p = need(params, "p");
      if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::NoSignChange, "tail equation needs p in (0,1)");
      lo = p;
      hi = kBelowOne;
      break;
    }
    case BreakpointEquation::DCT:
    case BreakpointEquation::DCE: {
      const double ft = need(params, "Ft");
      if (!(ft > 0.0 && ft < 1.0)) fail(ErrorCode::NoSignChange, "past equation needs Ft in (0,1)");
      lo = kTiny;
      hi = ft;
      break;
    }
  }
  return find_root(f, lo, hi);
}

namespace {

using Kind = Kernel::Kind;

std::vector<EnvelopeSegment> contact_run(const Curve& c, UnitPoint lo, UnitPoint hi) {
  std::vector<EnvelopeSegment> out;
  UnitPoint a = lo;
  for (double k : c.kinks) {
    const UnitPoint kp = k > 0.5 ? unit_from_complement(1.0 - k) : unit(k);
    if (before(a, kp) && before(kp, hi)) {
      out.push_back({EnvelopeSegment::Kind::Contact, a, kp, c.value(a), c.value(kp), 0.0});
      a = kp;
    }
  }
  out.push_back({EnvelopeSegment::Kind::Contact, a, hi, c.value(a), c.value(hi), 0.0});
  return out;
}

PiecewiseEnvelope convex(const Curve& c) {
  return PiecewiseEnvelope(contact_run(c, unit(0.0), unit(1.0)), c,
                           PiecewiseEnvelope::Route::Analytic);
}

// Chord from (0,0) to the tangency point, then the source.
PiecewiseEnvelope bridge_left(const Curve& c, UnitPoint u0) {
  const double g0 = c.value(u0);
  std::vector<EnvelopeSegment> segs;
  segs.push_back({EnvelopeSegment::Kind::Linear, unit(0.0), u0, 0.0, g0, g0 / u0.u});
  for (auto& s : contact_run(c, u0, unit(1.0))) segs.push_back(s);
  return PiecewiseEnvelope(std::move(segs), c, PiecewiseEnvelope::Route::Analytic);
}

// The source, then the chord from the tangency point to (1, ghat(1)).
PiecewiseEnvelope bridge_right(const Curve& c, UnitPoint u1) {
  const double g1 = c.value(u1);
  const double end = c.value(unit(1.0));
  std::vector<EnvelopeSegment> segs = contact_run(c, unit(0.0), u1);
  segs.push_back({EnvelopeSegment::Kind::Linear, u1, unit(1.0), g1, end, (end - g1) / u1.v});
  return PiecewiseEnvelope(std::move(segs), c, PiecewiseEnvelope::Route::Analytic);
}

bool power_convex(const Kernel& k) { return k.scale * (k.exponent - 1.0) > 0.0; }

[[noreturn]] void no_form(const TransformedGHat& g) {
  fail(ErrorCode::NoAnalyticForm, "no closed-form envelope for " + g.source().family() + " in " +
                                      std::string(mode_name(g.mode())) + " mode");
}

PiecewiseEnvelope entropy_envelope(const TransformedGHat& g, const Curve& c) {
  const Kernel& k = g.source().kernel();
  switch (k.kind) {
    case Kind::PowerResidual:
    case Kind::PowerPast:
      if (power_convex(k)) return convex(c);
      break;
    case Kind::LogResidual:
    case Kind::LogPast:
      return convex(c);
    case Kind::FracResidual:
      if (k.exponent <= 1.0) return convex(c);
      return bridge_left(c, unit(solve_breakpoint(BreakpointEquation::FGRE, {{"alpha", k.exponent}})));
    case Kind::FracPast:
      if (k.exponent <= 1.0) return convex(c);
      return bridge_right(c, unit(solve_breakpoint(BreakpointEquation::FGE, {{"alpha", k.exponent}})));
    default:
      break;
  }
  no_form(g);
}

}  // namespace

PiecewiseEnvelope convex_envelope_analytic(const TransformedGHat& g) {
  const Kernel& k = g.source().kernel();
  const Curve c = curve_of(g);
  const double ft = g.truncation();
  switch (g.mode()) {
    case Mode::Riskmetric:
      if (k.kind == Kind::ExpectedShortfall) return convex(c);
      if (std::abs(g.source().g1()) <= 1e-12) return entropy_envelope(g, c);
      break;
    case Mode::Entropy:
      return entropy_envelope(g, c);
    case Mode::Residual:
      if (ft == 0.0) return entropy_envelope(g, c);
      if (k.kind == Kind::PowerResidual && power_convex(k)) {
        const double u0 = k.exponent == 2.0
                              ? std::sqrt(ft)
                              : solve_breakpoint(BreakpointEquation::TCRTE,
                                                 {{"alpha", k.exponent}, {"p", ft}});
        return bridge_left(c, unit(u0));
      }
      if (k.kind == Kind::LogResidual) {
        return bridge_left(c, unit(solve_breakpoint(BreakpointEquation::TCRE, {{"p", ft}})));
      }
      break;
    case Mode::Past:
      if (ft == 1.0) return entropy_envelope(g, c);
      if (k.kind == Kind::PowerPast && power_convex(k)) {
        const double u1 = k.exponent == 2.0
                              ? -std::expm1(0.5 * std::log1p(-ft))
                              : solve_breakpoint(BreakpointEquation::DCT,
                                                 {{"alpha", k.exponent}, {"Ft", ft}});
        return bridge_right(c, unit(u1));
      }
      if (k.kind == Kind::LogPast) {
        return bridge_right(c, unit(solve_breakpoint(BreakpointEquation::DCE, {{"Ft", ft}})));
      }
      break;
    case Mode::Shortfall: {
      if (std::abs(g.source().g1()) > 1e-12 && g.tau() != 0.0) break;
      // Convex on [p,1] iff the base is concave and the slope at p is >= 0.
      double g_prime_at_one = 0.0;
      bool concave = true;
      if (k.kind == Kind::PowerResidual) {
        concave = k.scale * k.exponent * (k.exponent - 1.0) >= 0.0;
        g_prime_at_one = k.scale * (1.0 - k.exponent);
      } else if (k.kind == Kind::LogResidual) {
        g_prime_at_one = -1.0;
      } else if (g.tau() != 0.0) {
        break;
      }
      if (g.tau() == 0.0 || (concave && 1.0 + g.tau() * g_prime_at_one >= -1e-12)) {
        std::vector<EnvelopeSegment> segs;
        const UnitPoint p = unit(g.p());
        segs.push_back({EnvelopeSegment::Kind::Linear, unit(0.0), p, 0.0, 0.0, 0.0});
        for (auto& s : contact_run(c, p, unit(1.0))) segs.push_back(s);
        return PiecewiseEnvelope(std::move(segs), c, PiecewiseEnvelope::Route::Analytic);
      }
      break;
    }
  }
  no_form(g);
}

bool has_analytic_envelope(const TransformedGHat& ghat) {
  try {
    convex_envelope_analytic(ghat);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoAnalyticForm) return false;
    throw;
  }
}

}  // namespace riskbound
