#pragma once

#include <iosfwd>
#include <vector>

#include "riskbound/distortion.hpp"
#include "riskbound/unit_interval.hpp"

namespace riskbound {

// A function on [0,1] to be enveloped.
struct Curve {
  UnitFn value;
  UnitFn derivative;          // right derivative
  std::vector<double> kinks;  // where derivative may jump
  std::vector<double> jumps;  // where value may jump (right-continuous)
};

Curve curve_of(const TransformedGHat& ghat);

struct EnvelopeSegment {
  enum class Kind { Linear, Contact };
  Kind kind = Kind::Linear;
  UnitPoint lo;
  UnitPoint hi;
  double value_lo = 0.0;
  double value_hi = 0.0;
  double slope = 0.0;  // Linear only
};

class PiecewiseEnvelope {
 public:
  enum class Route { Analytic, Numeric };

  PiecewiseEnvelope(std::vector<EnvelopeSegment> segments, Curve source, Route route,
                    bool jump_chord = false);

  const std::vector<EnvelopeSegment>& segments() const { return segments_; }
  const Curve& source() const { return source_; }
  Route route() const { return route_; }
  // True when a jump of the source was bridged by a chord.
  bool jump_chord() const { return jump_chord_; }

  std::vector<double> knots() const;
  std::vector<double> values() const;
  // Knots where the envelope touches the source, plus interior contact runs'
  // endpoints.
  std::vector<double> contact_set() const;

  double value(UnitPoint x) const;
  double value(double u) const { return value(unit(u)); }
  double slope(UnitPoint x) const;  // right derivative; last segment at u = 1
  double slope(double u) const { return slope(unit(u)); }
  double slope_left(UnitPoint x) const;

 private:
  std::size_t locate(UnitPoint x) const;

  std::vector<EnvelopeSegment> segments_;
  Curve source_;
  Route route_;
  bool jump_chord_;
};

// Grid size from RISKBOUND_GRID when set (integer >= 17), else 4097.
int default_grid_size();

PiecewiseEnvelope convex_envelope_numeric(const Curve& curve, int n_grid);
PiecewiseEnvelope convex_envelope_numeric(const TransformedGHat& ghat, int n_grid);
PiecewiseEnvelope convex_envelope_numeric(const TransformedGHat& ghat);

// Closed-form envelopes for the catalog kernels; throws NoAnalyticForm.
PiecewiseEnvelope convex_envelope_analytic(const TransformedGHat& ghat);
bool has_analytic_envelope(const TransformedGHat& ghat);

enum class BreakpointEquation {
  FGRE,     // alpha u + log(1-u) = 0 on [1 - e^(1-alpha), 1]
  FGE,      // alpha (1-u) + log u = 0 on [0, e^(1-alpha)]
  TCRTE,    // (1-p)^(alpha-1) - (1-u)^(alpha-1) [1 + (alpha-1) u] = 0 on [p, 1]
  TCRE,     // u + log((1-u)/(1-p)) = 0 on [p, 1]
  TNEGini,  // (1-u)^r + r u (1-u)^(r-1) - (1-p)^(r-1) = 0 on [p, 1]
  DCT,      // Ft^(alpha-1) - u^(alpha-1) [u + alpha (1-u)] = 0 on [0, Ft]
  DCE,      // u - 1 - log(u/Ft) = 0 on [0, Ft]
};

double breakpoint_residual(BreakpointEquation eq, const ParamMap& params, double u);
double solve_breakpoint(BreakpointEquation eq, const ParamMap& params);

// sqrt( int_0^1 (slope(u) - center)^2 du ).
double slope_l2_norm(const PiecewiseEnvelope& env, double center);

// Columns u, ghat, envelope, slope on n uniform points plus the knots.
void write_envelope_csv(std::ostream& os, const PiecewiseEnvelope& env, int n_points = 1001);

}  // namespace riskbound
