#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskbound/bounds.hpp"
#include "riskbound/distortion.hpp"
#include "riskbound/quantile.hpp"

namespace riskbound {

// Quantile made of linear pieces on [a_i, b_i]; consecutive pieces may jump.
struct PiecewiseLinearQuantile {
  struct Piece {
    double a, b;    // a < b, pieces tile [0,1]
    double qa, qb;  // values at a (right limit) and b (left limit)
  };
  std::vector<Piece> pieces;

  double eval(double u) const;
  double mean() const;
  double variance() const;
  // mu + sigma (Q - mean)/sd.
  PiecewiseLinearQuantile standardized(double mu, double sigma) const;
  QuantileFn as_quantile() const;
};

// int Q d ghat for a piecewise linear Q, by parts against int ghat du.
double riskmetric_of_piecewise_linear(const TransformedGHat& ghat, const PiecewiseLinearQuantile& q);

// Parameter-free shapes at mean 0 and unit variance: "uniform", "normal",
// "exponential", "neg_exponential".
QuantileFn standard_shape(const std::string& name);

struct StressReport {
  std::string family;
  ParamMap params;
  double bound = 0.0;
  std::optional<double> max_observed;
  std::optional<double> gap;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string worst_shape;
  bool violated = false;
};

// Evaluates the riskmetric at `trials` random members of V(mu, sigma) and
// compares against the engine bound. Throws BoundViolated.
StressReport feasibility_stress(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                                const MomentInfo& moments, int trials, std::uint64_t seed);

StressReport family_stress(const std::string& family, const ParamMap& params,
                           const MomentInfo& moments, int trials, std::uint64_t seed);

std::string stress_report_json(const StressReport& r);

}  // namespace riskbound
