#include "riskbound/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "riskbound/error.hpp"

namespace riskbound {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::ParamOutOfDomain: return "ParamOutOfDomain";
    case ErrorCode::ModeContractViolation: return "ModeContractViolation";
    case ErrorCode::BadTruncationPoint: return "BadTruncationPoint";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoAnalyticForm: return "NoAnalyticForm";
    case ErrorCode::NonInvertibleWeight: return "NonInvertibleWeight";
    case ErrorCode::DegenerateResult: return "DegenerateResult";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  UnitPoint a;
  UnitPoint b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const UnitFn& f, UnitPoint a, UnitPoint b) {
  const double half = 0.5 * distance(a, b);
  const UnitPoint c = midpoint(a, b);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f({c.u - dx, c.v + dx});
    const double f2 = f({c.u + dx, c.v - dx});
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    fail(ErrorCode::NonFiniteValue, "integrand is not finite on [" + std::to_string(a.u) +
                                        ", " + std::to_string(b.u) + "]");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const UnitFn& f, UnitPoint a, UnitPoint b,
                           const QuadratureOptions& opts) {
  QuadratureResult out;
  if (!before(a, b)) return out;
  std::priority_queue<Panel> heap;
  Panel first = gauss_kronrod(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (count >= opts.max_intervals) break;
    Panel worst = heap.top();
    const UnitPoint m = midpoint(worst.a, worst.b);
    if (!before(worst.a, m) || !before(m, worst.b)) break;  // cannot split further
    heap.pop();
    Panel left = gauss_kronrod(f, worst.a, m);
    Panel right = gauss_kronrod(f, m, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  err = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return std::abs(x.value) < std::abs(y.value); });
  for (const Panel& p : panels) {
    total += p.value;
    err += p.error;
  }
  out.value = total;
  out.error = err;
  out.intervals = count;
  out.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  // Shift [a,b] onto [0, b-a] so the same machinery applies.
  const double len = b - a;
  if (!(len > 0.0)) return {};
  UnitFn g = [&](UnitPoint x) { return f(a + x.u * len) * len; };
  return integrate(g, unit(0.0), unit(1.0), opts);
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       const QuadratureOptions& opts) {
  UnitFn g = [&](UnitPoint s) {
    if (s.v <= 0.0) return 0.0;
    const double t = a + s.u / s.v;
    const double val = f(t);
    return val == 0.0 ? 0.0 : val / (s.v * s.v);
  };
  return integrate(g, unit(0.0), unit(1.0), opts);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    fail(ErrorCode::NonFiniteValue, "bracket endpoint evaluates to a non-finite value");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    fail(ErrorCode::NoSignChange, "no sign change on [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
  }
  const double width0 = hi - lo;
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fbest = std::min(std::abs(flo), std::abs(fhi));
  int side = 0;  // Illinois bookkeeping
  for (int it = 0; it < opts.max_iterations; ++it) {
    double x;
    if (hi - lo > 1e-3 * width0) {
      x = 0.5 * (lo + hi);
    } else {
      x = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    }
    if (x <= lo || x >= hi) break;
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      fail(ErrorCode::NonFiniteValue, "function is not finite at " + std::to_string(x));
    }
    if (std::abs(fx) < fbest) {
      fbest = std::abs(fx);
      best = x;
    }
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (fbest <= opts.residual_tol * 1e-3) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
      break;
    }
  }
  return best;
}

double upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0)) {
    fail(ErrorCode::DomainError, "upper incomplete gamma needs s > 0 and x >= 0");
  }
  const auto integrand = [s](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp((s - 1.0) * std::log(t) - t);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  QuadratureResult r = integrate_to_infinity(integrand, x, opts);
  if (!(r.error <= 1e-10 * std::abs(r.value))) {
    fail(ErrorCode::NonConvergent, "incomplete gamma quadrature did not converge");
  }
  return r.value;
}

}  // namespace riskbound
