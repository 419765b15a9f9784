#include "riskbound/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "riskbound/bounds.hpp"
#include "riskbound/error.hpp"

namespace riskbound {

namespace {

struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct Resolved {
  int decades;
  int per_decade;
  double tolerance;
};

Resolved resolve(const StieltjesRule& rule, TailClass tail) {
  const bool divergent = tail != TailClass::Bounded;
  Resolved r{rule.decades, rule.per_decade, rule.tolerance};
  if (r.decades <= 0) r.decades = divergent ? 60 : 16;
  if (r.per_decade <= 0) r.per_decade = divergent ? 40 : 8;
  if (r.tolerance <= 0.0) r.tolerance = divergent ? 1e-6 : 1e-8;
  return r;
}

std::vector<UnitPoint> partition(const std::vector<double>& breakpoints, int base_cells,
                                 const Resolved& r) {
  std::vector<UnitPoint> pts;
  const int n = std::max(base_cells, 1);
  for (int i = 0; i <= n; ++i) {
    // Upper half from the complement so 1 - i/n is exact.
    if (2 * i <= n) {
      pts.push_back(unit(static_cast<double>(i) / n));
    } else {
      pts.push_back(unit_from_complement(static_cast<double>(n - i) / n));
    }
  }
  // Graded all the way to 1/2 so no uniform cell touches an endpoint
  // singularity at full width.
  const int steps = r.decades * r.per_decade;
  for (int k = 1; k <= steps; ++k) {
    const double h = 0.5 * std::pow(10.0, -static_cast<double>(k) / r.per_decade);
    pts.push_back(unit(h));
    pts.push_back(unit_from_complement(h));
  }
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) pts.push_back(b > 0.5 ? unit_from_complement(1.0 - b) : unit(b));
  }
  std::sort(pts.begin(), pts.end(), before);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](UnitPoint a, UnitPoint b) { return std::abs(distance(a, b)) <= 0.0; }),
            pts.end());
  return pts;
}

// `increments(a, b, d)` fills d[k] with the measure of the k-th quarter of
// [a, b].
template <class Increments>
double stieltjes_sum(const UnitFn& f, Increments&& increments, const std::vector<UnitPoint>& pts,
                     const Resolved& r) {
  NeumaierSum s1, s2, s4, scale;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const UnitPoint a = pts[i];
    const UnitPoint b = pts[i + 1];
    double dm[4];
    increments(a, b, dm);
    double fv[4];
    for (int k = 0; k < 4; ++k) fv[k] = f(lerp(a, b, (2 * k + 1) / 8.0));
    const double f_quarter = f(lerp(a, b, 0.25));
    const double f_half = f(lerp(a, b, 0.5));
    const double f_three = f(lerp(a, b, 0.75));

    s1.add(f_half * (dm[0] + dm[1] + dm[2] + dm[3]));
    s2.add(f_quarter * (dm[0] + dm[1]));
    s2.add(f_three * (dm[2] + dm[3]));
    for (int k = 0; k < 4; ++k) {
      const double term = fv[k] * dm[k];
      s4.add(term);
      scale.add(std::abs(term));
    }
  }
  const double r1 = (4.0 * s2.value() - s1.value()) / 3.0;
  const double r2 = (4.0 * s4.value() - s2.value()) / 3.0;
  if (!std::isfinite(r2)) fail(ErrorCode::NonFiniteValue, "Stieltjes sum is not finite");
  const double ref = std::max(1.0, scale.value());
  if (std::abs(r2 - r1) > 10.0 * r.tolerance * ref) {
    fail(ErrorCode::NonConvergent, "Stieltjes refinements disagree: " + format_double(r1) +
                                       " vs " + format_double(r2));
  }
  return r2;
}

// int f du with cell widths taken from the accurate coordinate, so cells
// near u = 1 keep their mass.
double lebesgue_integral(const UnitFn& f, const std::vector<double>& breakpoints, TailClass tail,
                         const StieltjesRule& rule) {
  const Resolved r = resolve(rule, tail);
  auto widths = [](UnitPoint a, UnitPoint b, double* dm) {
    UnitPoint lo = a;
    for (int k = 0; k < 4; ++k) {
      const UnitPoint hi = k == 3 ? b : lerp(a, b, 0.25 * (k + 1));
      dm[k] = distance(lo, hi);
      lo = hi;
    }
  };
  return stieltjes_sum(f, widths, partition(breakpoints, rule.base_cells, r), r);
}

}  // namespace

double stieltjes(const UnitFn& f, const UnitFn& m, const std::vector<double>& breakpoints,
                 TailClass tail, const StieltjesRule& rule) {
  const Resolved r = resolve(rule, tail);
  const std::vector<UnitPoint> pts = partition(breakpoints, rule.base_cells, r);
  double m_prev = m(pts.front());
  auto increments = [&m, &m_prev](UnitPoint a, UnitPoint b, double* dm) {
    double mv[5];
    mv[0] = m_prev;
    for (int k = 1; k < 4; ++k) mv[k] = m(lerp(a, b, 0.25 * k));
    mv[4] = m(b);
    m_prev = mv[4];
    for (int k = 0; k < 4; ++k) dm[k] = mv[k + 1] - mv[k];
  };
  return stieltjes_sum(f, increments, pts, r);
}

namespace {

std::vector<double> merged_breakpoints(const TransformedGHat& ghat, const QuantileFn& q) {
  std::vector<double> b = q.breakpoints();
  b.insert(b.end(), ghat.kinks().begin(), ghat.kinks().end());
  b.insert(b.end(), ghat.jumps().begin(), ghat.jumps().end());
  return b;
}

}  // namespace

double riskmetric_of_quantile(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                              const QuantileFn& q, const StieltjesRule& rule) {
  const TransformedGHat ghat = make_ghat(g, mode, extras);
  return stieltjes([&q](UnitPoint x) { return q.eval(x); },
                   [&ghat](UnitPoint x) { return ghat.value(x); }, merged_breakpoints(ghat, q),
                   q.tail_class(), rule);
}

double weighted_entropy_of_quantile(const DistortionFn& g, const WeightSpec& w, const QuantileFn& q,
                                    Mode mode, const ModeExtras& extras, const StieltjesRule& rule) {
  const TransformedGHat ghat = make_ghat(g, mode, extras);
  return stieltjes([&q, &w](UnitPoint x) { return w.Psi(q.eval(x)); },
                   [&ghat](UnitPoint x) { return ghat.value(x); }, merged_breakpoints(ghat, q),
                   q.tail_class(), rule);
}

QuantileMoments quantile_moments(const QuantileFn& q, const StieltjesRule& rule) {
  const UnitFn identity_q = [&q](UnitPoint x) { return q.eval(x); };
  QuantileMoments out;
  out.mean = lebesgue_integral(identity_q, q.breakpoints(), q.tail_class(), rule);
  const double mean = out.mean;
  out.variance = lebesgue_integral(
      [&q, mean](UnitPoint x) {
        const double d = q.eval(x) - mean;
        return d * d;
      },
      q.breakpoints(), q.tail_class(), rule);
  return out;
}

}  // namespace riskbound
