#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "riskbound/unit_interval.hpp"

namespace riskbound {

enum class TailClass { Bounded, LogDivergent, PowerDivergent };

// A nondecreasing function on (0,1): either an evaluator or a grid of
// (u, Q) pairs. Repeated u values in a grid encode a jump; the value is
// right-continuous there.
class QuantileFn {
 public:
  static QuantileFn analytic(UnitFn f, std::vector<double> breakpoints = {},
                             TailClass tail = TailClass::Bounded);
  // Like analytic(), but the tail class is probed from the evaluator.
  static QuantileFn analytic_probed(UnitFn f, std::vector<double> breakpoints = {});
  static QuantileFn constant(double c);
  // Between nodes the grid is interpolated by a monotone cubic in the
  // logit coordinate log(u/(1-u)); outside it is held flat.
  static QuantileFn from_grid(std::vector<double> u, std::vector<double> q);

  double operator()(double u) const { return eval(unit(u)); }
  double eval(UnitPoint x) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  TailClass tail_class() const { return tail_; }
  bool is_grid() const { return grid_ != nullptr; }

  // a + b*Q(u), b > 0.
  QuantileFn affine(double a, double b) const;

 private:
  struct Grid;

  UnitFn f_;
  std::shared_ptr<const Grid> grid_;
  std::vector<double> breakpoints_;
  TailClass tail_ = TailClass::Bounded;
};

TailClass probe_tail(const UnitFn& f);

struct QuantileSample {
  std::vector<double> u;
  std::vector<double> q;
};

// Materializes Q at 1001 points on [1e-9, 1-1e-9], densest near the ends,
// with each knot inserted as a (left limit, value) pair.
QuantileSample sample_quantile(const QuantileFn& q, const std::vector<double>& knots,
                               const UnitFn& left_limit);

void write_quantile_csv(std::ostream& os, const QuantileSample& s);
QuantileSample read_quantile_csv(std::istream& is);

}  // namespace riskbound
