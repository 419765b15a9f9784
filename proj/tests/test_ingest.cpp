#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "riskbound/error.hpp"
#include "riskbound/ingest.hpp"
#include "riskbound/report.hpp"

using namespace riskbound;
using Catch::Approx;

namespace {

std::string temp_csv(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("riskbound_" + name + ".csv");
  std::ofstream(path) << body;
  return path.string();
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

ReturnSeries series(std::vector<double> v) {
  ReturnSeries s;
  s.values = std::move(v);
  return s;
}

}  // namespace

TEST_CASE("load a named column") {
  const ReturnSeries s = load_returns_csv(temp_csv("ret", "date,ret\n2020-01-01,1\n2020-01-02,2\n2020-01-03,3\n"), "ret");
  CHECK(s.values == std::vector<double>{1, 2, 3});
  CHECK(s.dates.size() == 3);
  CHECK(s.label == "ret");
  const ReturnSeries by_index = load_returns_csv(temp_csv("ret_idx", "a,b\n5,1\n6,2\n"), "0");
  CHECK(by_index.values == std::vector<double>{5, 6});
}

TEST_CASE("blank cells are skipped and counted") {
  std::string body = "id,x\n";
  for (int i = 0; i < 10; ++i) body += std::to_string(i) + "," + (i == 4 ? "" : std::to_string(i * 0.5)) + "\n";
  const ReturnSeries s = load_returns_csv(temp_csv("blank", body), "x");
  CHECK(s.values.size() == 9);
  CHECK(s.skipped == 1);
}

TEST_CASE("load errors") {
  CHECK(code_of([] { load_returns_csv("/nonexistent/file.csv", "x"); }) == ErrorCode::FileNotFound);
  CHECK(code_of([] { load_returns_csv(temp_csv("short", "a,b\n1,2\n3\n"), "a"); }) == ErrorCode::MalformedCsv);
  CHECK(code_of([] { load_returns_csv(temp_csv("text", "a\n1\nfoo\n"), "a"); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { load_returns_csv(temp_csv("empty", "a\n"), "a"); }) == ErrorCode::EmptySeries);
  CHECK(code_of([] { load_returns_csv(temp_csv("dates", "date,a\n2020-01-02,1\n2020-01-01,2\n"), "a"); }) ==
        ErrorCode::MalformedCsv);
}

TEST_CASE("sample moments") {
  const MomentInfo pop = sample_moments(series({1, 2, 3}), Estimator::Population);
  CHECK(pop.mu == Approx(2.0));
  CHECK(pop.sigma * pop.sigma == Approx(2.0 / 3.0).epsilon(1e-14));
  const MomentInfo smp = sample_moments(series({1, 2, 3}), Estimator::Sample);
  CHECK(smp.sigma * smp.sigma == Approx(1.0).epsilon(1e-14));
  for (Estimator e : {Estimator::Population, Estimator::Sample}) {
    const MomentInfo c = sample_moments(series({0.1, 0.1, 0.1}), e);
    CHECK(c.mu == 0.1);
    CHECK(c.sigma == 0.0);
  }
  CHECK(code_of([] { sample_moments(series({1.0}), Estimator::Sample); }) == ErrorCode::TooFewObservations);
  CHECK(parse_estimator("sample") == Estimator::Sample);
  CHECK(code_of([] { parse_estimator("median"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("moments are permutation invariant") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> N(0.1, 2.0);
  std::vector<double> v(501);
  for (double& x : v) x = N(rng);
  const MomentInfo a = sample_moments(series(v));
  for (int k = 0; k < 5; ++k) {
    std::shuffle(v.begin(), v.end(), rng);
    const MomentInfo b = sample_moments(series(v));
    CHECK(b.mu == a.mu);
    CHECK(b.sigma == a.sigma);
  }
}

TEST_CASE("prices to returns") {
  const std::vector<double> r = prices_to_returns({100, 110, 99});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == Approx(10.0));
  CHECK(r[1] == Approx(-10.0));
}

TEST_CASE("report properties") {
  const auto kappa = linear_grid(0.0, 1.0, 11);
  const auto p = linear_grid(0.9, 0.99, 10);
  CHECK(kappa[10] == 1.0);
  CHECK(p[9] == Approx(0.99).epsilon(1e-15));
  const auto moments = stock_moments();
  const Report rep = bound_report(moments, default_premium_families(), default_shortfalls(0.5), kappa, p);
  std::map<std::string, double> mu;
  for (const auto& [l, m] : moments) mu[l] = m.mu;
  std::map<std::string, std::vector<const ReportRow*>> groups;
  for (const ReportRow& r : rep.rows) groups[r.label + r.family + r.params + r.grid_var].push_back(&r);
  for (const auto& [key, rows] : groups) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i]->bound > rows[i - 1]->bound);
      CHECK(rows[i]->increment == Approx(rows[i]->bound - rows[i - 1]->bound).margin(1e-15));
    }
    if (rows.front()->grid_var == "kappa") {
      const double m = mu[rows.front()->label];
      CHECK(rows.front()->bound == m);
      const double b1 = rows.back()->bound;
      for (const ReportRow* r : rows) CHECK(std::abs(r->bound - (m + r->grid_value * (b1 - m))) <= 1e-12);
    }
  }
  for (const ReportRow& r : rep.rows) {
    if (r.label != "AAPL" || (r.grid_var == "kappa" && r.grid_value == 0.0)) continue;
    for (const ReportRow& o : rep.rows) {
      if (o.label != "AAPL" && o.family == r.family && o.params == r.params && o.grid_var == r.grid_var &&
          o.grid_value == r.grid_value) {
        CHECK(r.bound > o.bound);
      }
    }
  }
  std::ostringstream os;
  write_report_csv(os, rep);
  CHECK(os.str().rfind("label,family,params,grid_var,grid_value,bound", 0) == 0);
}
