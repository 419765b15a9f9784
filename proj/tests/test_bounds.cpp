#include <cmath>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "riskbound/bounds.hpp"
#include "riskbound/catalog.hpp"
#include "riskbound/error.hpp"
#include "sweep.hpp"

using namespace riskbound;
using Catch::Approx;

namespace {

BoundResult entropy_bound(const std::string& family, const ParamMap& params, double mu, double sigma) {
  return family_bound(family, params, MomentInfo{mu, sigma, false});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("Gini semi-difference worst case") {
  const BoundResult r = entropy_bound("GiniSemidiff", {}, 0.0, 1.0);
  CHECK(r.sup_value == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  REQUIRE(r.quantile);
  for (double u : {0.01, 0.2, 0.5, 0.77, 0.999}) {
    CHECK(worst_case_quantile(r, u) == Approx(std::sqrt(3.0) * (2 * u - 1)).margin(1e-12));
  }
}

TEST_CASE("CRE bound equals sigma with a log quantile") {
  const BoundResult r = entropy_bound("CRE", {}, 2.0, 3.0);
  CHECK(r.sup_value == Approx(3.0).epsilon(1e-12));
  for (double u : {0.1, 0.5, 0.9, 0.999999}) {
    CHECK(worst_case_quantile(r, u) == Approx(2.0 - 3.0 * (std::log1p(-u) + 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("zero sigma collapses to the centre term") {
  const BoundResult r = entropy_bound("CRE", {}, 2.0, 0.0);
  CHECK(r.sup_value == 0.0);
  REQUIRE(r.quantile);
  CHECK(worst_case_quantile(r, 0.3) == 2.0);
  const DistortionFn id = DistortionFn::custom([](UnitPoint s) { return s.u; });
  const BoundResult d = worst_case_bound(id, Mode::Riskmetric, {}, MomentInfo{1.5, 1.0, false});
  CHECK(d.degenerate);
  CHECK(d.sup_value == Approx(1.5));
  CHECK(code_of([&] { worst_case_quantile(d, 0.5); }) == ErrorCode::DegenerateResult);
}

TEST_CASE("EGini r=3 closed form and numeric path") {
  const double expected = 4.0 / std::sqrt(5.0);
  CHECK(entropy_bound("EGini", {{"r", 3.0}}, 0.0, 1.0).sup_value == Approx(expected).epsilon(1e-12));
  BoundOptions numeric;
  numeric.prefer_analytic = false;
  CHECK(std::abs(family_bound("EGini", {{"r", 3.0}}, {0.0, 1.0, false}, numeric).sup_value - expected) <= 1e-7);
}

TEST_CASE("weighted bounds") {
  const BoundResult wcre = family_bound("WCRE", {}, MomentInfo{3.0, 1.0, true});
  CHECK(wcre.sup_value == Approx(1.0).epsilon(1e-10));
  CHECK(wcre.weighted);
  const BoundResult wct = family_bound("WCT", {{"alpha", 2.0}}, MomentInfo{3.0, std::sqrt(3.0), true});
  CHECK(wct.sup_value == Approx(1.0).epsilon(1e-10));

  const DistortionFn gini = catalog_lookup("GiniSemidiff", {});
  const MomentInfo m{0.3, 1.2, false};
  const BoundResult a = worst_case_weighted(gini, unit_weight(), m);
  const BoundResult b = worst_case_bound(gini, Mode::Entropy, {}, m);
  CHECK(a.sup_value == Approx(b.sup_value).epsilon(1e-14));
  REQUIRE(a.quantile);
  for (double u : {0.1, 0.5, 0.9}) CHECK((*a.quantile)(u) == Approx((*b.quantile)(u)).margin(1e-12));
}

TEST_CASE("weighted quantile is only recovered where Psi is invertible") {
  // Gini worst case in Psi units dips below Psi(0) = 0, so no X-quantile exists.
  const BoundResult r = family_bound("WGini", {}, MomentInfo{0.0, 1.0, true});
  CHECK(r.weighted_quantile);
  CHECK_FALSE(r.quantile);
  CHECK(code_of([&] { worst_case_quantile(r, 0.5); }) == ErrorCode::NonInvertibleWeight);
  const BoundResult ok = family_bound("WGini", {}, MomentInfo{5.0, 1.0, true});
  REQUIRE(ok.quantile);
  for (double u : {0.1, 0.5, 0.9}) {
    const double x = (*ok.quantile)(u);
    CHECK(x * x / 2 == Approx((*ok.weighted_quantile)(u)).epsilon(1e-12));
  }
}

TEST_CASE("closed forms") {
  const MomentInfo unit_m{0.0, 1.0, false};
  CHECK(closed_form_sup("CRT", {{"alpha", 2.0}}, unit_m) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(closed_form_sup("FGRE", {{"alpha", 1.0}}, unit_m) == Approx(1.0).epsilon(1e-12));
  BoundOptions numeric;
  numeric.prefer_analytic = false;
  const double tgini = family_bound("TGini", {{"p", 0.81}}, unit_m, numeric).sup_value;
  CHECK(std::abs(closed_form_sup("TGini", {{"p", 0.81}}, unit_m) - tgini) <= 1e-7);
  CHECK(code_of([&] { closed_form_sup("CT", {{"alpha", 0.5}}, unit_m); }) == ErrorCode::ParamOutOfDomain);
}

TEST_CASE("premium bounds") {
  const MomentInfo csco{0.04371627, std::sqrt(0.191021554), false};
  const double exact = 0.04371627 + 2.0 * std::sqrt(0.191021554) / std::sqrt(3.0);
  CHECK(premium_bound("BGini", {}, 1.0, csco) == Approx(exact).epsilon(1e-13));
  for (const char* f : {"BGini", "BCE", "BCRE", "BEGini"}) {
    const ParamMap params = std::string(f) == "BEGini" ? ParamMap{{"r", 2.0}} : ParamMap{};
    CHECK(premium_bound(f, params, 0.0, csco) == csco.mu);
  }
  CHECK(premium_bound("BCT", {{"alpha", 3.0}}, 1.0, {0.0, 1.0, false}) == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(premium_base_family("BGini") == "Gini");
  CHECK(premium_base_family("BE") == "CRE");
  CHECK(code_of([&] { premium_bound("BGini", {}, -0.5, csco); }) == ErrorCode::ParamOutOfDomain);
}

TEST_CASE("shortfall examples") {
  const MomentInfo m{0.0, 1.0, false};
  ShortfallSpec es;
  es.family = "ES";
  es.p = 0.5;
  const BoundResult r = shortfall_bound(es, m);
  CHECK(r.sup_value == Approx(1.0).epsilon(1e-14));
  CHECK(worst_case_quantile(r, 0.25) == Approx(-1.0).epsilon(1e-14));
  CHECK(worst_case_quantile(r, 0.75) == Approx(1.0).epsilon(1e-14));

  ShortfallSpec gs;
  gs.family = "GS";
  gs.p = 0.9;
  gs.tau = 0.5;
  CHECK(shortfall_bound(gs, m).sup_value == Approx(std::sqrt(3.7 / 0.3)).epsilon(1e-12));
  ShortfallSpec cres = gs;
  cres.family = "CRES";
  CHECK(shortfall_bound(cres, m).sup_value == Approx(std::sqrt(11.5)).epsilon(1e-12));
  ShortfallSpec crtes = cres;
  crtes.family = "CRTES";
  crtes.alpha = 1.0 + 1e-6;
  CHECK(std::abs(shortfall_bound(crtes, m).sup_value - std::sqrt(11.5)) <= 1e-4);

  ShortfallSpec bad = gs;
  bad.tau = 0.6;
  CHECK(code_of([&] { shortfall_bound(bad, m); }) == ErrorCode::ParamOutOfDomain);

  ShortfallSpec capped = es;
  capped.p = 1.0 - 1e-9;
  CHECK(shortfall_bound(capped, m).p_capped);
}

TEST_CASE("named and numeric shortfall paths agree") {
  BoundOptions numeric;
  numeric.prefer_analytic = false;
  const MomentInfo m{0.2, 1.3, false};
  for (const auto& c : testing::family_sweep()) {
    if (c.family != "GS" && c.family != "EGS" && c.family != "CRES" && c.family != "CRTES") continue;
    ShortfallSpec s;
    s.family = c.family;
    s.p = c.params.at("p");
    s.tau = c.params.at("tau");
    if (c.params.count("alpha")) s.alpha = c.params.at("alpha");
    if (c.params.count("r")) s.r = c.params.at("r");
    INFO(c.family << " " << format_params(c.params));
    const double named = shortfall_bound(s, m).sup_value;
    const double engine = family_bound(c.family, s.params(), m, numeric).sup_value;
    CHECK(std::abs(named - engine) <= 1e-7 * std::abs(named));
  }
}

TEST_CASE("worst-case quantile examples and errors") {
  const BoundResult cre = entropy_bound("CRE", {}, 0.0, 1.0);
  CHECK(worst_case_quantile(cre, 1.0 - std::exp(-1.0)) == Approx(0.0).margin(1e-14));
  ShortfallSpec es;
  es.family = "ES";
  es.p = 0.9;
  CHECK(worst_case_quantile(shortfall_bound(es, {0.0, 1.0, false}), 0.95) == Approx(3.0).epsilon(1e-14));
  const BoundResult gini = entropy_bound("Gini", {}, 0.0, 1.0);
  CHECK(worst_case_quantile(gini, 0.5) == Approx(0.0).margin(1e-14));
  for (double u : {0.0, 1.0, -0.1, 1.5}) {
    CHECK(code_of([&] { worst_case_quantile(cre, u); }) == ErrorCode::DomainError);
  }
}

TEST_CASE("translation and scale equivariance") {
  for (const auto& c : testing::family_sweep()) {
    if (catalog_problem(c.family, c.params).weight) continue;
    INFO(c.family << " " << format_params(c.params));
    const BoundResult base = family_bound(c.family, c.params, {0.4, 1.1, false});
    for (double a : {-1.0, 1.0}) {
      const BoundResult shifted = family_bound(c.family, c.params, {0.4 + a, 1.1, false});
      const double expected = base.sup_value + a * base.center_scale;
      CHECK(std::abs(shifted.sup_value - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
    for (double k : {0.5, 2.0}) {
      const BoundResult scaled = family_bound(c.family, c.params, {0.4, 1.1 * k, false});
      const double sigma_term = base.sup_value - 0.4 * base.center_scale;
      const double expected = 0.4 * base.center_scale + k * sigma_term;
      CHECK(std::abs(scaled.sup_value - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("sup is the centre term plus sigma times the slope norm") {
  for (const auto& c : testing::family_sweep()) {
    const BoundResult r = family_bound(c.family, c.params, {0.7, 1.9, false});
    CHECK(r.sup_value == Approx(0.7 * r.center_scale + 1.9 * r.l2_term).epsilon(1e-12));
  }
}

TEST_CASE("shortfall bounds increase in p") {
  const MomentInfo m{0.1, 0.9, false};
  for (const char* f : {"ES", "GS", "CRES", "CRTES", "EGS"}) {
    double prev = -INFINITY;
    for (int i = 0; i <= 9; ++i) {
      ShortfallSpec s;
      s.family = f;
      s.p = 0.9 + 0.01 * i;
      s.tau = std::string(f) == "ES" ? 0.0 : 0.5;
      s.alpha = 3.0;
      s.r = 3.0;
      const double v = shortfall_bound(s, m).sup_value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("records serialize") {
  const BoundResult r = entropy_bound("CT", {{"alpha", 2.0}}, 0.5, 2.0);
  CHECK(bound_record_csv_header() == "family,params,mu,sigma,sup,l2_term,degenerate");
  const std::string row = bound_record_csv_row(r);
  CHECK(row.rfind("CT,", 0) == 0);
  const auto j = nlohmann::json::parse(bound_record_json(r));
  CHECK(j.at("family") == "CT");
  CHECK(j.at("sup").get<double>() == r.sup_value);
  CHECK(std::stod(format_double(r.sup_value)) == r.sup_value);
}
