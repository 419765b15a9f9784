#include "riskbound/distortion.hpp"

#include <algorithm>
#include <cmath>

#include "riskbound/error.hpp"

namespace riskbound {

DistortionFn::DistortionFn(std::string family, ParamMap params, UnitFn g, UnitFn g_prime,
                           Continuity continuity, Kernel kernel, std::vector<double> jumps,
                           std::vector<double> kinks)
    : family_(std::move(family)),
      params_(std::move(params)),
      g_(std::move(g)),
      g_prime_(std::move(g_prime)),
      continuity_(continuity),
      kernel_(kernel),
      jumps_(std::move(jumps)),
      kinks_(std::move(kinks)) {
  if (!g_) fail(ErrorCode::InvalidArgument, "distortion '" + family_ + "' has no evaluator");
  std::sort(jumps_.begin(), jumps_.end());
  std::sort(kinks_.begin(), kinks_.end());
  g1_ = eval({1.0, 0.0});
}

DistortionFn DistortionFn::custom(UnitFn g, UnitFn g_prime, Continuity continuity,
                                  std::vector<double> jumps) {
  return DistortionFn("custom", {}, std::move(g), std::move(g_prime), continuity, {},
                      std::move(jumps));
}

double DistortionFn::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) {
    fail(ErrorCode::ParamOutOfDomain, family_ + ": missing parameter '" + key + "'");
  }
  return it->second;
}

double DistortionFn::eval(UnitPoint s) const {
  if (s.u <= 0.0) return 0.0;
  const double val = g_(s);
  if (!std::isfinite(val)) {
    fail(ErrorCode::NonFiniteValue,
         family_ + ": g is not finite at u = " + std::to_string(s.u));
  }
  return val;
}

double DistortionFn::derivative(UnitPoint s) const {
  if (g_prime_) return g_prime_(s);
  const double h = 1e-6;
  if (s.u < h) return (eval({s.u + h, s.v - h}) - eval(s)) / h;
  if (s.v < h) return (eval(s) - eval({s.u - h, s.v + h})) / h;
  return (eval({s.u + h, s.v - h}) - eval({s.u - h, s.v + h})) / (2.0 * h);
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Riskmetric: return "riskmetric";
    case Mode::Entropy: return "entropy";
    case Mode::Residual: return "residual";
    case Mode::Past: return "past";
    case Mode::Shortfall: return "shortfall";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Riskmetric, Mode::Entropy, Mode::Residual, Mode::Past, Mode::Shortfall}) {
    if (mode_name(m) == name) return m;
  }
  fail(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

namespace {

void add_unique(std::vector<double>& xs, double x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
}

}  // namespace

TransformedGHat::TransformedGHat(DistortionFn source, Mode mode, ModeExtras extras)
    : source_(std::move(source)), mode_(mode), extras_(extras) {
  const double g1 = source_.g1();
  const bool g1_zero = std::abs(g1) <= 1e-12;
  const double ft = extras_.truncation;
  const double p = extras_.p;
  switch (mode_) {
    case Mode::Riskmetric:
      center_ = g1;
      for (double s : source_.jumps()) add_unique(jumps_, 1.0 - s);
      for (double s : source_.kinks()) add_unique(kinks_, 1.0 - s);
      break;
    case Mode::Entropy:
      if (!g1_zero) {
        fail(ErrorCode::ModeContractViolation,
             "entropy mode needs g(1) = 0, got g(1) = " + std::to_string(g1));
      }
      for (double s : source_.jumps()) add_unique(jumps_, 1.0 - s);
      for (double s : source_.kinks()) add_unique(kinks_, 1.0 - s);
      break;
    case Mode::Residual:
      if (!(ft >= 0.0 && ft < 1.0)) {
        fail(ErrorCode::BadTruncationPoint, "residual mode needs F_t in [0,1)");
      }
      if (ft > 0.0) kinks_.push_back(ft);
      if (!g1_zero) add_unique(jumps_, ft);
      for (double s : source_.jumps()) add_unique(jumps_, 1.0 - (1.0 - ft) * s);
      for (double s : source_.kinks()) add_unique(kinks_, 1.0 - (1.0 - ft) * s);
      break;
    case Mode::Past:
      if (!(ft > 0.0 && ft <= 1.0)) {
        fail(ErrorCode::BadTruncationPoint, "past mode needs F_t in (0,1]");
      }
      if (ft < 1.0) kinks_.push_back(ft);
      if (!g1_zero) add_unique(jumps_, 0.0);
      for (double s : source_.jumps()) add_unique(jumps_, ft * (1.0 - s));
      for (double s : source_.kinks()) add_unique(kinks_, ft * (1.0 - s));
      break;
    case Mode::Shortfall:
      if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::ParamOutOfDomain, "shortfall needs p in (0,1)");
      if (!(extras_.tau >= 0.0)) fail(ErrorCode::ParamOutOfDomain, "shortfall needs tau >= 0");
      center_ = 1.0;
      kinks_.push_back(p);
      if (!g1_zero && extras_.tau != 0.0) add_unique(jumps_, p);
      for (double s : source_.jumps()) add_unique(jumps_, 1.0 - (1.0 - p) * s);
      for (double s : source_.kinks()) add_unique(kinks_, 1.0 - (1.0 - p) * s);
      break;
  }
  for (double j : jumps_) {
    if (j > 0.0) add_unique(kinks_, j);
  }
  std::erase_if(kinks_, [](double k) { return !(k > 0.0 && k < 1.0); });
  std::sort(kinks_.begin(), kinks_.end());
  std::sort(jumps_.begin(), jumps_.end());
}

double TransformedGHat::value(UnitPoint x) const {
  if (x.u <= 0.0) return 0.0;
  switch (mode_) {
    case Mode::Riskmetric:
      return source_.g1() - source_.eval(reflect(x));
    case Mode::Entropy:
      return -source_.eval(reflect(x));
    case Mode::Residual: {
      const double ft = extras_.truncation;
      if (x.u < ft) return 0.0;
      const double w = 1.0 - ft;
      const UnitPoint s{std::min(1.0, x.v / w), std::max(0.0, (x.u - ft) / w)};
      return -source_.eval(s);
    }
    case Mode::Past: {
      const double ft = extras_.truncation;
      if (x.u > ft) return 0.0;
      const UnitPoint s{std::max(0.0, (ft - x.u) / ft), std::min(1.0, x.u / ft)};
      return -source_.eval(s);
    }
    case Mode::Shortfall: {
      const double p = extras_.p;
      if (x.u < p) return 0.0;
      const double w = 1.0 - p;
      const UnitPoint s{std::min(1.0, x.v / w), std::max(0.0, (x.u - p) / w)};
      return s.v - extras_.tau * source_.eval(s);
    }
  }
  return 0.0;
}

double TransformedGHat::derivative(UnitPoint x) const {
  switch (mode_) {
    case Mode::Riskmetric:
    case Mode::Entropy:
      return source_.derivative(reflect(x));
    case Mode::Residual: {
      const double ft = extras_.truncation;
      if (x.u < ft) return 0.0;
      const double w = 1.0 - ft;
      const UnitPoint s{std::min(1.0, x.v / w), std::max(0.0, (x.u - ft) / w)};
      return source_.derivative(s) / w;
    }
    case Mode::Past: {
      const double ft = extras_.truncation;
      if (x.u >= ft) return 0.0;
      const UnitPoint s{std::max(0.0, (ft - x.u) / ft), std::min(1.0, x.u / ft)};
      return source_.derivative(s) / ft;
    }
    case Mode::Shortfall: {
      const double p = extras_.p;
      if (x.u < p) return 0.0;
      const double w = 1.0 - p;
      const UnitPoint s{std::min(1.0, x.v / w), std::max(0.0, (x.u - p) / w)};
      return (1.0 + extras_.tau * source_.derivative(s)) / w;
    }
  }
  return 0.0;
}

TransformedGHat make_ghat(const DistortionFn& g, Mode mode, const ModeExtras& extras) {
  return TransformedGHat(g, mode, extras);
}

WeightSpec unit_weight() {
  WeightSpec w;
  w.name = "unit";
  w.psi = [](double) { return 1.0; };
  w.Psi = [](double x) { return x; };
  w.Psi_inverse = [](double y) { return y; };
  return w;
}

WeightSpec linear_weight() {
  WeightSpec w;
  w.name = "linear";
  w.psi = [](double x) { return x; };
  w.Psi = [](double x) { return 0.5 * x * x; };
  w.Psi_inverse = [](double y) {
    if (y < 0.0) {
      fail(ErrorCode::DomainError,
           "x^2/2 = " + std::to_string(y) + " has no nonnegative preimage");
    }
    return std::sqrt(2.0 * y);
  };
  w.domain_lo = 0.0;
  return w;
}

WeightSpec weight_by_name(std::string_view name) {
  if (name == "unit") return unit_weight();
  if (name == "linear") return linear_weight();
  fail(ErrorCode::InvalidArgument, "unknown weight '" + std::string(name) +
                                       "' (expected unit or linear)");
}

std::pair<double, double> eval_weight(const WeightSpec& w, double x) {
  if (!std::isfinite(x) || x < w.domain_lo) {
    fail(ErrorCode::DomainError, "weight '" + w.name + "' is not defined at x = " +
                                     std::to_string(x));
  }
  return {w.psi(x), w.Psi(x)};
}

}  // namespace riskbound
