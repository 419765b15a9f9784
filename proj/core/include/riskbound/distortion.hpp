#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riskbound/unit_interval.hpp"

namespace riskbound {

using ParamMap = std::map<std::string, double>;

enum class Continuity { Continuous, Left, Right };

// Structural description of a catalog g, used to pick the closed-form
// envelope. Power kernels are g(s) = scale*(s - s^exponent) (residual form)
// or scale*((1-s) - (1-s)^exponent) (past form).
struct Kernel {
  enum class Kind {
    Custom,
    PowerResidual,
    PowerPast,
    LogResidual,  // -s log s
    LogPast,      // -(1-s) log(1-s)
    FracResidual,  // s (-log s)^a / Gamma(a+1)
    FracPast,      // (1-s) (-log(1-s))^a / Gamma(a+1)
    ExpectedShortfall,
  };
  Kind kind = Kind::Custom;
  double scale = 1.0;
  double exponent = 1.0;
};

class DistortionFn {
 public:
  DistortionFn(std::string family, ParamMap params, UnitFn g, UnitFn g_prime = {},
               Continuity continuity = Continuity::Continuous, Kernel kernel = {},
               std::vector<double> jumps = {}, std::vector<double> kinks = {});

  static DistortionFn custom(UnitFn g, UnitFn g_prime = {},
                             Continuity continuity = Continuity::Continuous,
                             std::vector<double> jumps = {});

  const std::string& family() const { return family_; }
  const ParamMap& params() const { return params_; }
  double param(const std::string& key) const;

  double operator()(double u) const { return eval(unit(u)); }
  double eval(UnitPoint s) const;

  bool has_derivative() const { return static_cast<bool>(g_prime_); }
  // Right derivative; central differences when no analytic form was given.
  double derivative(UnitPoint s) const;

  Continuity continuity() const { return continuity_; }
  double g1() const { return g1_; }
  const Kernel& kernel() const { return kernel_; }
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& kinks() const { return kinks_; }

 private:
  std::string family_;
  ParamMap params_;
  UnitFn g_;
  UnitFn g_prime_;
  Continuity continuity_;
  Kernel kernel_;
  std::vector<double> jumps_;
  std::vector<double> kinks_;
  double g1_ = 0.0;
};

enum class Mode { Riskmetric, Entropy, Residual, Past, Shortfall };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct ModeExtras {
  double truncation = 0.0;  // F_t, residual and past modes
  double p = 0.5;           // shortfall level
  double tau = 0.0;         // shortfall loading

  static ModeExtras at_truncation(double ft) { return {ft, 0.5, 0.0}; }
  static ModeExtras shortfall(double p, double tau) { return {0.0, p, tau}; }
};

class TransformedGHat {
 public:
  TransformedGHat(DistortionFn source, Mode mode, ModeExtras extras);

  Mode mode() const { return mode_; }
  const DistortionFn& source() const { return source_; }
  const ModeExtras& extras() const { return extras_; }
  double truncation() const { return extras_.truncation; }
  double p() const { return extras_.p; }
  double tau() const { return extras_.tau; }
  double center() const { return center_; }

  double operator()(double u) const { return value(unit(u)); }
  double value(UnitPoint x) const;
  double derivative(UnitPoint x) const;

  // Points in (0,1) where ghat' may jump, sorted.
  const std::vector<double>& kinks() const { return kinks_; }
  // Points in [0,1) where ghat itself jumps (right limit differs), sorted.
  const std::vector<double>& jumps() const { return jumps_; }

 private:
  DistortionFn source_;
  Mode mode_;
  ModeExtras extras_;
  double center_ = 0.0;
  std::vector<double> kinks_;
  std::vector<double> jumps_;
};

TransformedGHat make_ghat(const DistortionFn& g, Mode mode, const ModeExtras& extras = {});

struct WeightSpec {
  std::string name;
  std::function<double(double)> psi;
  std::function<double(double)> Psi;
  std::function<double(double)> Psi_inverse;  // empty when Psi is not invertible
  double domain_lo = -std::numeric_limits<double>::infinity();

  bool invertible() const { return static_cast<bool>(Psi_inverse); }
};

// psi = 1, Psi(x) = x.
WeightSpec unit_weight();
// psi(x) = x, Psi(x) = x^2/2 on x >= 0.
WeightSpec linear_weight();
WeightSpec weight_by_name(std::string_view name);

std::pair<double, double> eval_weight(const WeightSpec& w, double x);

}  // namespace riskbound
