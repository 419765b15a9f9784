#include "riskbound/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "riskbound/error.hpp"

namespace riskbound {

namespace {

double logit(UnitPoint x) { return log_u(x) - log_v(x); }

// Fritsch-Butland slopes for one monotone piece.
std::vector<double> pchip_slopes(const std::vector<double>& z, const std::vector<double>& q,
                                 std::size_t lo, std::size_t hi) {
  const std::size_t n = hi - lo;
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = z[lo + k + 1] - z[lo + k];
    delta[k] = (q[lo + k + 1] - q[lo + k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

struct QuantileFn::Grid {
  std::vector<double> u;
  std::vector<double> z;
  std::vector<double> q;
  std::vector<double> d;

  double eval(UnitPoint x) const {
    if (x.u <= u.front()) return q.front();
    if (x.u >= u.back()) return q.back();
    // Last node with u_i <= x, so repeated nodes give right-continuity.
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), x.u) - u.begin()) - 1;
    if (i + 1 >= u.size() || u[i + 1] == u[i]) return q[i];
    const double hz = z[i + 1] - z[i];
    const double t = (logit(x) - z[i]) / hz;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * q[i] + (t3 - 2 * t2 + t) * hz * d[i] +
           (-2 * t3 + 3 * t2) * q[i + 1] + (t3 - t2) * hz * d[i + 1];
  }
};

QuantileFn QuantileFn::analytic(UnitFn f, std::vector<double> breakpoints, TailClass tail) {
  QuantileFn out;
  out.f_ = std::move(f);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::erase_if(breakpoints, [](double b) { return !(b > 0.0 && b < 1.0); });
  out.breakpoints_ = std::move(breakpoints);
  out.tail_ = tail;
  return out;
}

QuantileFn QuantileFn::analytic_probed(UnitFn f, std::vector<double> breakpoints) {
  const TailClass tail = probe_tail(f);
  return analytic(std::move(f), std::move(breakpoints), tail);
}

QuantileFn QuantileFn::constant(double c) {
  return analytic([c](UnitPoint) { return c; });
}

QuantileFn QuantileFn::from_grid(std::vector<double> u, std::vector<double> q) {
  if (u.size() != q.size() || u.empty()) {
    fail(ErrorCode::InvalidArgument, "quantile grid needs equally many u and Q values");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0 && u[i] < 1.0) || !std::isfinite(q[i])) {
      fail(ErrorCode::DomainError, "quantile grid point " + std::to_string(i) +
                                       " is outside (0,1) or not finite");
    }
    if (i > 0 && (u[i] < u[i - 1] || q[i] < q[i - 1] - 1e-12 * (1.0 + std::abs(q[i])))) {
      fail(ErrorCode::DomainError,
           "quantile grid is not nondecreasing at row " + std::to_string(i));
    }
  }
  auto grid = std::make_shared<Grid>();
  grid->u = std::move(u);
  grid->q = std::move(q);
  grid->z.resize(grid->u.size());
  for (std::size_t i = 0; i < grid->u.size(); ++i) grid->z[i] = logit(unit(grid->u[i]));
  grid->d.assign(grid->u.size(), 0.0);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= grid->u.size(); ++i) {
    if (i == grid->u.size() || grid->u[i] == grid->u[i - 1]) {
      const auto d = pchip_slopes(grid->z, grid->q, start, i);
      std::copy(d.begin(), d.end(), grid->d.begin() + static_cast<std::ptrdiff_t>(start));
      start = i;
    }
  }
  QuantileFn out;
  out.grid_ = grid;
  out.breakpoints_ = grid->u;
  out.breakpoints_.erase(std::unique(out.breakpoints_.begin(), out.breakpoints_.end()),
                         out.breakpoints_.end());
  out.tail_ = TailClass::Bounded;
  return out;
}

double QuantileFn::eval(UnitPoint x) const {
  if (grid_) return grid_->eval(x);
  return f_(x);
}

QuantileFn QuantileFn::affine(double a, double b) const {
  QuantileFn base = *this;
  QuantileFn out;
  out.f_ = [base, a, b](UnitPoint x) { return a + b * base.eval(x); };
  out.breakpoints_ = breakpoints_;
  out.tail_ = tail_;
  return out;
}

TailClass probe_tail(const UnitFn& f) {
  const double lo_far = f(unit(1e-300));
  const double lo_mid = f(unit(1e-150));
  const double lo_near = f(unit(1e-8));
  const double hi_far = f(unit_from_complement(1e-300));
  const double hi_mid = f(unit_from_complement(1e-150));
  const double hi_near = f(unit_from_complement(1e-8));
  auto flat = [](double far, double near) {
    return std::abs(far - near) <= 1e-6 * (1.0 + std::abs(near));
  };
  if (flat(lo_far, lo_near) && flat(hi_far, hi_near)) return TailClass::Bounded;
  auto power = [](double far, double mid) {
    return !std::isfinite(far) || std::abs(far) > 10.0 * (1.0 + std::abs(mid));
  };
  if (power(lo_far, lo_mid) || power(hi_far, hi_mid)) return TailClass::PowerDivergent;
  return TailClass::LogDivergent;
}

QuantileSample sample_quantile(const QuantileFn& q, const std::vector<double>& knots,
                               const UnitFn& left_limit) {
  constexpr int kLogit = 501;
  constexpr int kUniform = 500;
  const double zmax = std::log(1e9 - 1.0);
  std::vector<UnitPoint> pts;
  for (int i = 0; i < kLogit; ++i) {
    const double z = -zmax + 2.0 * zmax * i / (kLogit - 1);
    // u = 1/(1+e^-z), v = 1/(1+e^z), each computed directly.
    pts.push_back({1.0 / (1.0 + std::exp(-z)), 1.0 / (1.0 + std::exp(z))});
  }
  for (int i = 1; i <= kUniform; ++i) pts.push_back(unit(static_cast<double>(i) / (kUniform + 1)));
  std::vector<UnitPoint> knot_pts;
  for (double k : knots) {
    if (k > 1e-9 && k < 1.0 - 1e-9) knot_pts.push_back(unit(k));
  }
  for (const auto& k : knot_pts) pts.push_back(k);
  std::sort(pts.begin(), pts.end(), before);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](UnitPoint a, UnitPoint b) { return a.u == b.u; }),
            pts.end());
  QuantileSample s;
  for (const UnitPoint& x : pts) {
    const bool is_knot = std::any_of(knot_pts.begin(), knot_pts.end(),
                                     [&](UnitPoint k) { return k.u == x.u; });
    const double value = q.eval(x);
    if (is_knot && left_limit) {
      const double left = left_limit(x);
      if (std::abs(left - value) > 1e-14 * (1.0 + std::abs(value))) {
        s.u.push_back(x.u);
        s.q.push_back(left);
      }
    }
    s.u.push_back(x.u);
    s.q.push_back(value);
  }
  return s;
}

void write_quantile_csv(std::ostream& os, const QuantileSample& s) {
  const auto old = os.precision(17);
  os << "u,Q\n";
  for (std::size_t i = 0; i < s.u.size(); ++i) os << s.u[i] << ',' << s.q[i] << '\n';
  os.precision(old);
}

QuantileSample read_quantile_csv(std::istream& is) {
  QuantileSample s;
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::MalformedCsv, "quantile CSV is empty");
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail(ErrorCode::MalformedCsv, "quantile CSV row " + std::to_string(row) + " needs 2 cells");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      s.u.push_back(std::stod(a, &used));
      if (used != a.size()) throw std::invalid_argument(a);
      s.q.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      fail(ErrorCode::NonNumericCell, "quantile CSV row " + std::to_string(row) + " is not numeric");
    }
  }
  return s;
}

}  // namespace riskbound
