#pragma once

// Points of [0,1] carried together with their complement, so that
// functions with singular behaviour at u = 1 can be evaluated at 1 - 1e-40
// without the complement rounding to zero.

#include <cmath>
#include <functional>

namespace riskbound {

struct UnitPoint {
  double u = 0.0;
  double v = 1.0;  // 1 - u, stored independently
};

inline UnitPoint unit(double u) { return {u, 1.0 - u}; }
inline UnitPoint unit_from_complement(double v) { return {1.0 - v, v}; }
inline UnitPoint reflect(UnitPoint p) { return {p.v, p.u}; }

// log(u) and log(1-u) using whichever coordinate is accurate.
inline double log_u(UnitPoint p) { return p.u > 0.5 ? std::log1p(-p.v) : std::log(p.u); }
inline double log_v(UnitPoint p) { return p.v > 0.5 ? std::log1p(-p.u) : std::log(p.v); }

// b - a, taken from the coordinate with the smaller magnitude.
inline double distance(UnitPoint a, UnitPoint b) {
  return (a.u <= 0.5 && b.u <= 0.5) ? b.u - a.u : a.v - b.v;
}

inline UnitPoint midpoint(UnitPoint a, UnitPoint b) {
  return {0.5 * (a.u + b.u), 0.5 * (a.v + b.v)};
}

// a + t*(b - a) for t in [0,1].
inline UnitPoint lerp(UnitPoint a, UnitPoint b, double t) {
  const double d = distance(a, b);
  return {a.u + t * d, a.v - t * d};
}

inline bool before(UnitPoint a, UnitPoint b) {
  return a.u < b.u || (a.u == b.u && a.v > b.v);
}

inline bool same_point(UnitPoint a, UnitPoint b) { return a.u == b.u && a.v == b.v; }

using UnitFn = std::function<double(UnitPoint)>;

}  // namespace riskbound
