#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riskbound/catalog.hpp"
#include "riskbound/distortion.hpp"
#include "riskbound/envelope.hpp"
#include "riskbound/quantile.hpp"

namespace riskbound {

struct MomentInfo {
  double mu = 0.0;
  double sigma = 1.0;
  bool weighted = false;  // (mu, sigma) describe Psi(X) rather than X

  void validate() const;
};

struct BoundResult {
  std::string family;
  ParamMap params;
  Mode mode = Mode::Entropy;
  double mu = 0.0;
  double sigma = 0.0;
  double sup_value = 0.0;
  double l2_term = 0.0;
  double center = 0.0;
  double center_scale = 0.0;
  bool degenerate = false;
  bool weighted = false;
  bool jump_chord = false;  // a jump of ghat was bridged by a chord
  bool p_capped = false;    // shortfall level was capped at 1 - 1e-6
  std::optional<QuantileFn> quantile;
  std::optional<QuantileFn> weighted_quantile;
  UnitFn quantile_left;  // left limits of the quantile, for grid export
  std::vector<double> knots;
  std::shared_ptr<const PiecewiseEnvelope> envelope;
};

struct BoundOptions {
  bool prefer_analytic = true;
  int n_grid = 0;  // 0: default_grid_size()
};

BoundResult worst_case_bound(const DistortionFn& g, Mode mode, const ModeExtras& extras,
                             const MomentInfo& moments, const BoundOptions& opts = {});

BoundResult worst_case_weighted(const DistortionFn& g, const WeightSpec& w,
                                const MomentInfo& moments, Mode mode = Mode::Entropy,
                                const ModeExtras& extras = {}, const BoundOptions& opts = {});

// Engine bound for a catalog family, in the family's own mode.
BoundResult family_bound(const std::string& family, const ParamMap& params,
                         const MomentInfo& moments, const BoundOptions& opts = {},
                         std::optional<WeightSpec> weight = std::nullopt);

// sup = mu * center_scale + sigma * coefficient.
struct ClosedForm {
  double coefficient = 0.0;
  double center_scale = 0.0;
};

ClosedForm closed_form(const std::string& family, const ParamMap& params);
double closed_form_sup(const std::string& family, const ParamMap& params, const MomentInfo& m);

// mu + kappa * (entropy bound at mean 0). Accepts "BGini"-style names.
double premium_bound(const std::string& family, const ParamMap& params, double kappa,
                     const MomentInfo& m);
std::string premium_base_family(const std::string& family);

struct ShortfallSpec {
  std::string family;  // GS, EGS, CRES, CRTES, ES or custom
  double p = 0.5;
  double tau = 0.0;
  double alpha = 0.0;  // CRTES
  double r = 0.0;      // EGS
  std::optional<DistortionFn> custom_g;

  ParamMap params() const;
};

BoundResult shortfall_bound(const ShortfallSpec& spec, const MomentInfo& m,
                            const BoundOptions& opts = {});

double worst_case_quantile(const BoundResult& result, double u);

// 1001-point grid of the worst-case quantile with knots inserted.
QuantileSample quantile_grid(const BoundResult& result);

std::string bound_record_csv_header();
std::string bound_record_csv_row(const BoundResult& r);
std::string bound_record_json(const BoundResult& r);

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace riskbound
