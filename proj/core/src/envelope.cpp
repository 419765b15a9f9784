#include "riskbound/envelope.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <string>

#include "riskbound/error.hpp"
#include "riskbound/numerics.hpp"

namespace riskbound {

Curve curve_of(const TransformedGHat& ghat) {
  auto shared = std::make_shared<const TransformedGHat>(ghat);
  Curve c;
  c.value = [shared](UnitPoint x) { return shared->value(x); };
  c.derivative = [shared](UnitPoint x) { return shared->derivative(x); };
  c.kinks = shared->kinks();
  c.jumps = shared->jumps();
  return c;
}

PiecewiseEnvelope::PiecewiseEnvelope(std::vector<EnvelopeSegment> segments, Curve source,
                                     Route route, bool jump_chord)
    : segments_(std::move(segments)),
      source_(std::move(source)),
      route_(route),
      jump_chord_(jump_chord) {
  if (segments_.empty()) fail(ErrorCode::InvalidArgument, "envelope without segments");
}

std::size_t PiecewiseEnvelope::locate(UnitPoint x) const {
  // Last segment whose lower end is <= x.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](UnitPoint p, const EnvelopeSegment& s) { return before(p, s.lo); });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(it - segments_.begin()) - 1;
}

std::vector<double> PiecewiseEnvelope::knots() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.lo.u);
  out.push_back(segments_.back().hi.u);
  return out;
}

std::vector<double> PiecewiseEnvelope::values() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.value_lo);
  out.push_back(segments_.back().value_hi);
  return out;
}

std::vector<double> PiecewiseEnvelope::contact_set() const {
  std::vector<double> out;
  auto touches = [&](UnitPoint x, double v) {
    const double g = source_.value(x);
    return std::abs(g - v) <= 1e-12 * (1.0 + std::abs(g));
  };
  for (const auto& s : segments_) {
    if (s.kind == EnvelopeSegment::Kind::Contact || touches(s.lo, s.value_lo)) out.push_back(s.lo.u);
    if (s.kind == EnvelopeSegment::Kind::Contact || touches(s.hi, s.value_hi)) out.push_back(s.hi.u);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double PiecewiseEnvelope::value(UnitPoint x) const {
  const EnvelopeSegment& s = segments_[locate(x)];
  if (s.kind == EnvelopeSegment::Kind::Contact) return source_.value(x);
  const double from_lo = distance(s.lo, x);
  const double from_hi = distance(x, s.hi);
  return from_lo <= from_hi ? s.value_lo + s.slope * from_lo : s.value_hi - s.slope * from_hi;
}

double PiecewiseEnvelope::slope(UnitPoint x) const {
  const EnvelopeSegment& s = segments_[locate(x)];
  if (s.kind == EnvelopeSegment::Kind::Contact) return source_.derivative(x);
  return s.slope;
}

double PiecewiseEnvelope::slope_left(UnitPoint x) const {
  std::size_t i = locate(x);
  if (i > 0 && !before(segments_[i].lo, x)) --i;
  const EnvelopeSegment& s = segments_[i];
  if (s.kind == EnvelopeSegment::Kind::Linear) return s.slope;
  const double eps = 1e-9 * distance(s.lo, s.hi);
  UnitPoint y{x.u - eps, x.v + eps};
  if (before(y, s.lo)) y = s.lo;
  return source_.derivative(y);
}

int default_grid_size() {
  if (const char* env = std::getenv("RISKBOUND_GRID")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 17 || n > 100000000) {
      fail(ErrorCode::InvalidArgument,
           std::string("RISKBOUND_GRID must be an integer >= 17, got '") + env + "'");
    }
    return static_cast<int>(n);
  }
  return 4097;
}

namespace {

struct Sample {
  UnitPoint x;
  double y;
};

UnitPoint shifted(UnitPoint base, double d) { return {base.u + d, base.v - d}; }

std::vector<UnitPoint> base_grid(int n, const Curve& c) {
  std::vector<UnitPoint> pts;
  const int last = n - 1;
  const double h = 1.0 / last;
  pts.reserve(static_cast<std::size_t>(n) + 64 * (c.kinks.size() + 2));
  for (int i = 0; i <= last; ++i) {
    if (2 * i <= last) {
      pts.push_back(unit(static_cast<double>(i) / last));
    } else {
      pts.push_back(unit_from_complement(static_cast<double>(last - i) / last));
    }
  }
  for (double d = 0.5 * h; d >= 1e-9; d *= 0.5) {
    pts.push_back(unit(d));
    pts.push_back(unit_from_complement(d));
  }
  for (double k : c.kinks) {
    const UnitPoint base = k > 0.5 ? unit_from_complement(1.0 - k) : unit(k);
    pts.push_back(base);
    for (double d = 0.5 * h; d >= 1e-9; d *= 0.5) {
      if (k - d > 0.0) pts.push_back(shifted(base, -d));
      if (k + d < 1.0) pts.push_back(shifted(base, d));
    }
  }
  for (double j : c.jumps) {
    const UnitPoint base = j > 0.5 ? unit_from_complement(1.0 - j) : unit(j);
    pts.push_back(base);
    if (j - 1e-12 > 0.0) pts.push_back(shifted(base, -1e-12));
    if (j + 1e-12 < 1.0) pts.push_back(shifted(base, 1e-12));
  }
  return pts;
}

void sort_unique(std::vector<UnitPoint>& pts) {
  std::sort(pts.begin(), pts.end(), before);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](UnitPoint a, UnitPoint b) { return distance(a, b) <= 1e-15; }),
            pts.end());
}

std::vector<Sample> sample(const Curve& c, const std::vector<UnitPoint>& pts) {
  std::vector<Sample> out;
  out.reserve(pts.size());
  for (const UnitPoint& x : pts) {
    const double y = c.value(x);
    if (!std::isfinite(y)) {
      fail(ErrorCode::NonFiniteValue, "ghat is not finite at u = " + std::to_string(x.u));
    }
    out.push_back({x, y});
  }
  return out;
}

// Lower hull by monotone chain; near-collinear points are dropped.
// Values may carry absolute rounding of a few ulps of the largest |y|
// (e.g. g(1) - g(1-u) near u = 0), so that much is treated as collinear.
std::vector<std::size_t> lower_hull(const std::vector<Sample>& s) {
  std::vector<std::size_t> h;
  h.reserve(s.size());
  double scale = 0.0;
  for (const Sample& x : s) scale = std::max(scale, std::abs(x.y));
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t i = 0; i < s.size(); ++i) {
    while (h.size() >= 2) {
      const Sample& a = s[h[h.size() - 2]];
      const Sample& b = s[h.back()];
      const Sample& c = s[i];
      const double dab = distance(a.x, b.x);
      const double dac = distance(a.x, c.x);
      const double t1 = dab * (c.y - a.y);
      const double t2 = (b.y - a.y) * dac;
      const double tol = 1e-14 * (std::abs(t1) + std::abs(t2)) + noise * (dab + dac);
      if (t1 - t2 <= tol) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  return h;
}

bool spans_jump(const Curve& c, UnitPoint a, UnitPoint b) {
  for (double j : c.jumps) {
    if (j == 0.0 ? a.u == 0.0 : (a.u < j && j <= b.u)) return true;
  }
  return false;
}

bool is_kink(const Curve& c, UnitPoint x) {
  return std::find(c.kinks.begin(), c.kinks.end(), x.u) != c.kinks.end();
}

bool kink_between(const Curve& c, UnitPoint a, UnitPoint b) {
  for (double k : c.kinks) {
    if (a.u < k && k < b.u) return true;
  }
  return false;
}

// Moves a bridge end that sits inside a smooth contact run onto the exact
// tangency with the other end held fixed. Sampling alone only pins it to
// about sqrt(eps), where curve and line agree to rounding.
void polish_end(const Curve& c, std::vector<Sample>& s, std::size_t end, const Sample& other) {
  if (end == 0 || end + 1 >= s.size()) return;
  const UnitPoint lo = s[end - 1].x;
  const UnitPoint hi = s[end + 1].x;
  if (is_kink(c, s[end].x) || kink_between(c, lo, hi) || spans_jump(c, lo, hi)) return;
  const bool right_end = before(other.x, s[end].x);
  auto gap = [&](double t) {
    const UnitPoint x = lerp(lo, hi, t);
    const double fx = c.value(x);
    return right_end ? c.derivative(x) * distance(other.x, x) - (fx - other.y)
                     : c.derivative(x) * distance(x, other.x) - (other.y - fx);
  };
  const double g0 = gap(0.0);
  const double g1 = gap(1.0);
  if (!(std::isfinite(g0) && std::isfinite(g1)) || g0 * g1 >= 0.0) return;
  try {
    RootOptions opts;
    opts.residual_tol = 0.0;
    opts.max_iterations = 200;
    const UnitPoint x = lerp(lo, hi, find_root(gap, 0.0, 1.0, opts));
    const double y = c.value(x);
    if (std::isfinite(y)) s[end] = {x, y};
  } catch (const Error&) {
  }
}

}  // namespace

PiecewiseEnvelope convex_envelope_numeric(const Curve& curve, int n_grid) {
  if (n_grid < 17) {
    fail(ErrorCode::InvalidArgument, "n_grid must be at least 17, got " + std::to_string(n_grid));
  }
  std::vector<UnitPoint> pts = base_grid(n_grid, curve);
  sort_unique(pts);
  std::vector<Sample> s = sample(curve, pts);
  std::vector<std::size_t> hull = lower_hull(s);

  // Refine around bridge endpoints so tangency points are located well
  // below the base spacing.
  constexpr int kRefinePasses = 2;
  constexpr int kRefinePoints = 32;
  for (int pass = 0; pass < kRefinePasses; ++pass) {
    std::vector<UnitPoint> extra;
    auto refine_cell = [&](std::size_t i, std::size_t j) {
      for (int k = 1; k <= kRefinePoints; ++k) {
        extra.push_back(lerp(s[i].x, s[j].x, static_cast<double>(k) / (kRefinePoints + 1)));
      }
    };
    auto refine_around = [&](std::size_t e) {
      if (e > 0) refine_cell(e - 1, e);
      if (e + 1 < s.size()) refine_cell(e, e + 1);
    };
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
      if (hull[k + 1] > hull[k] + 1 && !spans_jump(curve, s[hull[k]].x, s[hull[k + 1]].x)) {
        refine_around(hull[k]);
        refine_around(hull[k + 1]);
      }
    }
    if (extra.empty()) break;
    for (const Sample& x : s) extra.push_back(x.x);
    sort_unique(extra);
    s = sample(curve, extra);
    hull = lower_hull(s);
  }

  const bool analytic_slope = static_cast<bool>(curve.derivative);
  if (analytic_slope) {
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
      const std::size_t a = hull[k];
      const std::size_t b = hull[k + 1];
      if (b == a + 1 || spans_jump(curve, s[a].x, s[b].x)) continue;
      const bool a_contact = k > 0 && hull[k - 1] + 1 == a;
      const bool b_contact = k + 2 < hull.size() && hull[k + 2] == b + 1;
      for (int round = 0; round < 3 && (a_contact || b_contact); ++round) {
        if (b_contact) polish_end(curve, s, b, s[a]);
        if (a_contact) polish_end(curve, s, a, s[b]);
      }
    }
  }
  std::vector<EnvelopeSegment> segs;
  bool jump_chord = false;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const Sample& a = s[hull[k]];
    const Sample& b = s[hull[k + 1]];
    const bool jump = spans_jump(curve, a.x, b.x);
    jump_chord = jump_chord || jump;
    const bool contact = analytic_slope && !jump && hull[k + 1] == hull[k] + 1;
    if (contact) {
      if (!segs.empty() && segs.back().kind == EnvelopeSegment::Kind::Contact &&
          !is_kink(curve, a.x)) {
        segs.back().hi = b.x;
        segs.back().value_hi = b.y;
        continue;
      }
      segs.push_back({EnvelopeSegment::Kind::Contact, a.x, b.x, a.y, b.y, 0.0});
    } else {
      const double slope = (b.y - a.y) / distance(a.x, b.x);
      segs.push_back({EnvelopeSegment::Kind::Linear, a.x, b.x, a.y, b.y, slope});
    }
  }
  return PiecewiseEnvelope(std::move(segs), curve, PiecewiseEnvelope::Route::Numeric, jump_chord);
}

PiecewiseEnvelope convex_envelope_numeric(const TransformedGHat& ghat, int n_grid) {
  return convex_envelope_numeric(curve_of(ghat), n_grid);
}

PiecewiseEnvelope convex_envelope_numeric(const TransformedGHat& ghat) {
  return convex_envelope_numeric(curve_of(ghat), default_grid_size());
}

double slope_l2_norm(const PiecewiseEnvelope& env, double center) {
  double total = 0.0;
  const Curve& src = env.source();
  QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 6000;
  for (const auto& seg : env.segments()) {
    if (seg.kind == EnvelopeSegment::Kind::Linear) {
      const double d = seg.slope - center;
      total += d * d * distance(seg.lo, seg.hi);
      continue;
    }
    const auto f = [&](UnitPoint x) {
      const double d = src.derivative(x) - center;
      return d * d;
    };
    QuadratureResult r = integrate(f, seg.lo, seg.hi, opts);
    if (!r.converged && r.error > 1e-9 * std::abs(r.value)) {
      fail(ErrorCode::NonConvergent,
           "squared slope is not integrable on [" + std::to_string(seg.lo.u) + ", " +
               std::to_string(seg.hi.u) + "]; the bound is infinite");
    }
    total += r.value;
  }
  if (!std::isfinite(total)) fail(ErrorCode::NonFiniteValue, "slope norm is not finite");
  return std::sqrt(total);
}

void write_envelope_csv(std::ostream& os, const PiecewiseEnvelope& env, int n_points) {
  std::vector<UnitPoint> pts;
  const int last = std::max(n_points, 2) - 1;
  for (int i = 0; i <= last; ++i) {
    pts.push_back(2 * i <= last ? unit(static_cast<double>(i) / last)
                                : unit_from_complement(static_cast<double>(last - i) / last));
  }
  for (const auto& seg : env.segments()) pts.push_back(seg.lo);
  sort_unique(pts);
  const auto old_precision = os.precision(17);
  os << "u,ghat,envelope,slope\n";
  for (const UnitPoint& x : pts) {
    os << x.u << ',' << env.source().value(x) << ',' << env.value(x) << ',' << env.slope(x)
       << '\n';
  }
  os.precision(old_precision);
}

}  // namespace riskbound
