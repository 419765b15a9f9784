#include "riskbound/stress.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <map>
#include <random>

#include "json.hpp"
#include "riskbound/catalog.hpp"
#include "riskbound/error.hpp"
#include "riskbound/numerics.hpp"
#include "riskbound/oracle.hpp"

namespace riskbound {

double PiecewiseLinearQuantile::eval(double u) const {
  for (const Piece& p : pieces) {
    if (u < p.b) return p.qa + (p.qb - p.qa) * (u - p.a) / (p.b - p.a);
  }
  return pieces.back().qb;
}

double PiecewiseLinearQuantile::mean() const {
  double s = 0.0;
  for (const Piece& p : pieces) s += (p.b - p.a) * 0.5 * (p.qa + p.qb);
  return s;
}

double PiecewiseLinearQuantile::variance() const {
  const double m = mean();
  double s = 0.0;
  for (const Piece& p : pieces) {
    const double x = p.qa - m;
    const double y = p.qb - m;
    s += (p.b - p.a) * (x * x + x * y + y * y) / 3.0;
  }
  return s;
}

PiecewiseLinearQuantile PiecewiseLinearQuantile::standardized(double mu, double sigma) const {
  const double m = mean();
  const double sd = std::sqrt(variance());
  if (!(sd > 0.0)) fail(ErrorCode::DegenerateResult, "cannot standardize a constant quantile");
  PiecewiseLinearQuantile out = *this;
  for (Piece& p : out.pieces) {
    p.qa = mu + sigma * (p.qa - m) / sd;
    p.qb = mu + sigma * (p.qb - m) / sd;
  }
  return out;
}

QuantileFn PiecewiseLinearQuantile::as_quantile() const {
  std::vector<double> cuts;
  for (std::size_t i = 1; i < pieces.size(); ++i) cuts.push_back(pieces[i].a);
  const PiecewiseLinearQuantile self = *this;
  return QuantileFn::analytic([self](UnitPoint x) { return self.eval(x.u); }, cuts);
}

double riskmetric_of_piecewise_linear(const TransformedGHat& ghat, const PiecewiseLinearQuantile& q) {
  const UnitFn value = [&ghat](UnitPoint x) { return ghat.value(x); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-15;
  double total = 0.0;
  for (const auto& p : q.pieces) {
    total += p.qb * ghat.value(unit(p.b)) - p.qa * ghat.value(unit(p.a));
    if (p.qb == p.qa) continue;
    std::vector<double> cuts{p.a};
    for (double k : ghat.kinks()) {
      if (k > p.a && k < p.b) cuts.push_back(k);
    }
    for (double j : ghat.jumps()) {
      if (j > p.a && j < p.b) cuts.push_back(j);
    }
    cuts.push_back(p.b);
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      area += integrate(value, unit(cuts[i]), unit(cuts[i + 1]), opts).value;
    }
    total -= (p.qb - p.qa) / (p.b - p.a) * area;
  }
  return total;
}

QuantileFn standard_shape(const std::string& name) {
  if (name == "uniform") {
    const double h = std::sqrt(3.0);
    return QuantileFn::analytic([h](UnitPoint x) { return h * (x.u - x.v); });
  }
  if (name == "normal") {
    return QuantileFn::analytic(
        [](UnitPoint x) {
          static const boost::math::normal_distribution<double> n;
          if (x.u <= 0.5) return boost::math::quantile(n, x.u);
          return -boost::math::quantile(n, x.v);
        },
        {}, TailClass::LogDivergent);
  }
  if (name == "exponential") {
    return QuantileFn::analytic([](UnitPoint x) { return -log_v(x) - 1.0; }, {}, TailClass::LogDivergent);
  }
  if (name == "neg_exponential") {
    return QuantileFn::analytic([](UnitPoint x) { return log_u(x) + 1.0; }, {}, TailClass::LogDivergent);
  }
  fail(ErrorCode::InvalidArgument, "unknown shape '" + name + "'");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on (0,1) from the top 53 bits; never returns 0.
double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

using Piece = PiecewiseLinearQuantile::Piece;

PiecewiseLinearQuantile two_point(std::mt19937_64& rng) {
  const double q = 0.001 + 0.998 * uniform01(rng);
  return {{Piece{0.0, q, 0.0, 0.0}, Piece{q, 1.0, 1.0, 1.0}}};
}

PiecewiseLinearQuantile three_point(std::mt19937_64& rng) {
  double a = 0.001 + 0.998 * uniform01(rng);
  double b = 0.001 + 0.998 * uniform01(rng);
  if (a > b) std::swap(a, b);
  if (b - a < 1e-3) b = std::min(a + 1e-3, 0.9995);
  const double mid = uniform01(rng);
  return {{Piece{0.0, a, 0.0, 0.0}, Piece{a, b, mid, mid}, Piece{b, 1.0, 1.0, 1.0}}};
}

// Random monotone piecewise-linear quantile with occasional jumps.
PiecewiseLinearQuantile random_spline(std::mt19937_64& rng) {
  const int k = 2 + static_cast<int>(rng() % 7);
  std::vector<double> cuts{0.0, 1.0};
  for (int i = 1; i < k; ++i) cuts.push_back(0.001 + 0.998 * uniform01(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-6; }),
             cuts.end());
  cuts.back() = 1.0;
  PiecewiseLinearQuantile out;
  double level = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (i > 0 && uniform01(rng) < 0.3) level += -std::log(uniform01(rng));
    const double rise = -std::log(uniform01(rng)) * uniform01(rng);
    out.pieces.push_back(Piece{cuts[i], cuts[i + 1], level, level + rise});
    level += rise;
  }
  if (!(out.variance() > 1e-12)) out.pieces.back().qb += 1.0;
  return out;
}

constexpr const char* kShapes[] = {"uniform", "two_point", "three_point", "normal",
                                   "exponential", "neg_exponential", "spline"};

std::string describe(const PiecewiseLinearQuantile& q) {
  std::string s;
  for (const auto& p : q.pieces) {
    s += " [" + format_double(p.a) + "," + format_double(p.b) + "]:" + format_double(p.qa) + "->" +
         format_double(p.qb);
  }
  return s;
}

}  // namespace

StressReport feasibility_stress(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                                const MomentInfo& moments, int trials, std::uint64_t seed) {
  StressReport rep;
  rep.family = g.family();
  rep.params = g.params();
  rep.trials = std::max(trials, 0);
  rep.seed = seed;
  const BoundResult bound = worst_case_bound(g, mode, extras, moments);
  rep.bound = bound.sup_value;
  if (trials <= 0) return rep;

  const TransformedGHat ghat = make_ghat(g, mode, extras);
  const double mass = ghat.value(unit(1.0)) - ghat.value(unit(0.0));
  const double slack = 1e-8 * (1.0 + std::abs(rep.bound));
  // The riskmetric is affine in Q, so parameter-free shapes are evaluated once.
  std::map<std::string, double> cached;
  auto standard_value = [&](const std::string& name) {
    auto it = cached.find(name);
    if (it == cached.end()) {
      const double v = riskmetric_of_quantile(g, mode, extras, standard_shape(name));
      it = cached.emplace(name, v).first;
    }
    return moments.mu * mass + moments.sigma * it->second;
  };

  double best = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
    const std::string shape = kShapes[t % std::size(kShapes)];
    double value = 0.0;
    std::string detail;
    if (shape == "normal" || shape == "exponential" || shape == "neg_exponential") {
      value = standard_value(shape);
    } else {
      PiecewiseLinearQuantile q;
      if (shape == "uniform") {
        q.pieces = {Piece{0.0, 1.0, 0.0, 1.0}};
      } else if (shape == "two_point") {
        q = two_point(rng);
      } else if (shape == "three_point") {
        q = three_point(rng);
      } else {
        q = random_spline(rng);
      }
      q = q.standardized(moments.mu, moments.sigma);
      value = riskmetric_of_piecewise_linear(ghat, q);
      detail = describe(q);
    }
    if (value > best) {
      best = value;
      rep.worst_shape = shape;
    }
    if (value > rep.bound + slack) {
      rep.violated = true;
      rep.max_observed = best;
      rep.gap = rep.bound - best;
      fail(ErrorCode::BoundViolated, rep.family + ": trial " + std::to_string(t) + " (" + shape +
                                         detail + ") gives " + format_double(value) +
                                         " above the bound " + format_double(rep.bound));
    }
  }
  rep.max_observed = best;
  rep.gap = rep.bound - best;
  return rep;
}

StressReport family_stress(const std::string& family, const ParamMap& params,
                           const MomentInfo& moments, int trials, std::uint64_t seed) {
  const Problem prob = catalog_problem(family, params);
  StressReport rep = feasibility_stress(prob.g, prob.mode, prob.extras, moments, trials, seed);
  rep.family = family;
  rep.params = params;
  return rep;
}

std::string stress_report_json(const StressReport& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["bound"] = r.bound;
  j["max_observed"] = r.max_observed ? nlohmann::ordered_json(*r.max_observed) : nullptr;
  j["gap"] = r.gap ? nlohmann::ordered_json(*r.gap) : nullptr;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["worst_shape"] = r.worst_shape;
  return j.dump();
}

}  // namespace riskbound
