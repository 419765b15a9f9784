#pragma once

#include <functional>

#include "riskbound/unit_interval.hpp"

namespace riskbound {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

// Globally adaptive Gauss-Kronrod (7/15) over [a,b] in complement-aware
// coordinates. The rule never evaluates the endpoints.
QuadratureResult integrate(const UnitFn& f, UnitPoint a, UnitPoint b,
                           const QuadratureOptions& opts = {});

// Plain real-line version of the same rule.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Integral over [a, inf) through t = a + s/(1-s).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       const QuadratureOptions& opts = {});

struct RootOptions {
  double residual_tol = 1e-12;
  int max_iterations = 400;
};

// Root of f in [lo, hi]. Bisection until the bracket is small, then secant
// steps kept inside the bracket. Throws NoSignChange.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts = {});

// Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt for s > 0, x >= 0.
double upper_incomplete_gamma(double s, double x);

}  // namespace riskbound
