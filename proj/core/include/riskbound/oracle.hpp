#pragma once

#include "riskbound/distortion.hpp"
#include "riskbound/quantile.hpp"

namespace riskbound {

// Partition for the Stieltjes sums: a uniform base plus geometric cells
// toward both endpoints. Zeros select defaults from the tail class.
struct StieltjesRule {
  int base_cells = 2048;
  int decades = 0;
  int per_decade = 0;
  double tolerance = 0.0;
};

// int_0^1 Q(u) d ghat(u).
double riskmetric_of_quantile(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                              const QuantileFn& q, const StieltjesRule& rule = {});

// int_0^1 Psi(Q(u)) d ghat(u).
double weighted_entropy_of_quantile(const DistortionFn& g, const WeightSpec& w, const QuantileFn& q,
                                    Mode mode = Mode::Entropy, const ModeExtras& extras = {},
                                    const StieltjesRule& rule = {});

struct QuantileMoments {
  double mean = 0.0;
  double variance = 0.0;
};

QuantileMoments quantile_moments(const QuantileFn& q, const StieltjesRule& rule = {});

// Generic midpoint Stieltjes sum of f against dm, Richardson-extrapolated
// over three nested partitions.
double stieltjes(const UnitFn& f, const UnitFn& m, const std::vector<double>& breakpoints,
                 TailClass tail, const StieltjesRule& rule = {});

}  // namespace riskbound
