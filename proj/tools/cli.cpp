#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "riskbound/bounds.hpp"
#include "riskbound/catalog.hpp"
#include "riskbound/envelope.hpp"
#include "riskbound/error.hpp"
#include "riskbound/ingest.hpp"
#include "riskbound/oracle.hpp"
#include "riskbound/report.hpp"
#include "riskbound/stress.hpp"

namespace riskbound::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// Accepts plain decimals and fractions such as 2/3.
double parse_number(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw UsageError("'" + text + "' is not a number");
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
  }
  return out;
}

// a:b:n with inclusive endpoints.
std::vector<double> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("grid must look like a:b:n, got '" + text + "'");
  const double a = parse_number(text.substr(0, c1));
  const double b = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
  const double n = parse_number(text.substr(c2 + 1));
  if (!(n >= 1.0) || n != std::floor(n)) throw UsageError("grid point count must be a positive integer");
  return linear_grid(a, b, static_cast<int>(n));
}

struct Output {
  std::string format = "human";
  std::string path;
};

struct MomentArgs {
  std::optional<double> mu;
  std::optional<double> sigma;
  std::string input;
  std::string column;
  std::string estimator = "population";
};

struct ProblemArgs {
  std::string family;
  std::vector<std::string> params;
  std::string mode;
  std::string weight;
  std::optional<double> ft;
  std::optional<double> p;
  std::optional<double> tau;
  bool numeric = false;
};

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "csv", "json"}));
  sub->add_option("--out", o.path, "Write output to this file");
}

void add_moments(CLI::App* sub, MomentArgs& m) {
  auto* mu = sub->add_option("--mu", m.mu, "Mean (or mean of Psi(X) for weighted families)");
  auto* sigma = sub->add_option("--sigma", m.sigma, "Standard deviation");
  auto* input = sub->add_option("--input", m.input, "CSV of returns to estimate the moments from");
  sub->add_option("--column", m.column, "Column name or zero-based index in --input");
  sub->add_option("--estimator", m.estimator, "population or sample variance")
      ->check(CLI::IsMember({"population", "sample"}));
  input->excludes(mu)->excludes(sigma);
}

void add_problem(CLI::App* sub, ProblemArgs& p, bool family_required = true) {
  auto* f = sub->add_option("--family", p.family, "Catalog family name");
  if (family_required) f->required();
  sub->add_option("--param", p.params, "Family parameter key=value (repeatable)");
  sub->add_option("--mode", p.mode, "Override the mode: riskmetric, entropy, residual, past, shortfall");
  sub->add_option("--weight", p.weight, "Weight for weighted families: linear or unit");
  sub->add_option("--ft", p.ft, "Truncation point F(t) for --mode residual/past");
  sub->add_option("--level", p.p, "Level p for --mode shortfall");
  sub->add_option("--loading", p.tau, "Loading tau for --mode shortfall");
  sub->add_flag("--numeric", p.numeric, "Use the numeric hull instead of the closed-form envelope");
}

MomentInfo resolve_moments(const MomentArgs& m, bool defaults_allowed = false) {
  if (!m.input.empty()) {
    if (m.column.empty()) throw UsageError("--input needs --column");
    return sample_moments(load_returns_csv(m.input, m.column), parse_estimator(m.estimator));
  }
  if (m.mu && m.sigma) return {*m.mu, *m.sigma, false};
  if (defaults_allowed && !m.mu && !m.sigma) return {0.0, 1.0, false};
  throw UsageError("give both --mu and --sigma, or --input with --column");
}

ModeExtras extras_of(const ProblemArgs& a) {
  ModeExtras e;
  if (a.ft) e.truncation = *a.ft;
  if (a.p) e.p = *a.p;
  if (a.tau) e.tau = *a.tau;
  return e;
}

BoundResult compute_bound(const ProblemArgs& a, const MomentInfo& m) {
  const ParamMap params = parse_params(a.params);
  BoundOptions opts;
  opts.prefer_analytic = !a.numeric;
  std::optional<WeightSpec> weight;
  if (!a.weight.empty()) weight = weight_by_name(a.weight);
  if (a.mode.empty()) return family_bound(a.family, params, m, opts, weight);
  const DistortionFn g = catalog_lookup(a.family, params);
  const Mode mode = parse_mode(a.mode);
  if (weight) return worst_case_weighted(g, *weight, m, mode, extras_of(a), opts);
  return worst_case_bound(g, mode, extras_of(a), m, opts);
}

// The distortion, mode and extras a problem argument set refers to.
struct Resolved {
  DistortionFn g;
  Mode mode;
  ModeExtras extras;
};

Resolved resolve_problem(const ProblemArgs& a) {
  const ParamMap params = parse_params(a.params);
  if (!a.mode.empty()) return {catalog_lookup(a.family, params), parse_mode(a.mode), extras_of(a)};
  Problem p = catalog_problem(a.family, params);
  return {std::move(p.g), p.mode, p.extras};
}

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path);
  if (!f) fail(ErrorCode::FileNotFound, "cannot write '" + o.path + "'");
  f << text;
}

std::string human_bound(const BoundResult& r) {
  std::ostringstream os;
  const std::string params = format_params(r.params);
  os << "family = " << r.family << '\n';
  if (!params.empty()) os << "params = " << params << '\n';
  os << "mode = " << mode_name(r.mode) << '\n';
  os << "mu = " << fixed6(r.mu) << '\n';
  os << "sigma = " << fixed6(r.sigma) << '\n';
  os << "sup = " << fixed6(r.sup_value) << '\n';
  os << "L = " << fixed6(r.l2_term) << '\n';
  if (r.degenerate) os << "degenerate = yes\n";
  if (r.jump_chord) os << "note = a jump of ghat was bridged by a chord\n";
  if (r.p_capped) os << "note = p was capped at 1 - 1e-6\n";
  return os.str();
}

std::string format_bound(const BoundResult& r, const std::string& format) {
  if (format == "csv") return bound_record_csv_header() + '\n' + bound_record_csv_row(r) + '\n';
  if (format == "json") return bound_record_json(r) + '\n';
  return human_bound(r);
}

// Default parameters used when verify runs over the whole catalog.
ParamMap default_params(const FamilyInfo& info) {
  ParamMap p;
  for (const std::string& k : info.params) {
    if (k == "alpha") p[k] = 2.0;
    if (k == "r") p[k] = 3.0;
    if (k == "p") p[k] = 0.9;
    if (k == "Ft") p[k] = 0.5;
    if (k == "tau") p[k] = 0.5;
    if (k == "n") p[k] = 2.0;
  }
  return p;
}

struct Check {
  std::string family;
  std::string params;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

int cmd_families(const Output& o, std::ostream& out) {
  std::ostringstream os;
  if (o.format == "json") {
    json arr = json::array();
    for (const FamilyInfo& f : families()) {
      arr.push_back({{"name", f.name}, {"params", f.params}, {"mode", std::string(mode_name(f.mode))},
                     {"weighted", f.weighted}, {"summary", f.summary}});
    }
    os << arr.dump() << '\n';
  } else if (o.format == "csv") {
    os << "name,params,mode,weighted\n";
    for (const FamilyInfo& f : families()) {
      std::string params;
      for (const auto& k : f.params) params += (params.empty() ? "" : ";") + k;
      os << f.name << ',' << params << ',' << mode_name(f.mode) << ',' << (f.weighted ? "true" : "false")
         << '\n';
    }
  } else {
    for (const FamilyInfo& f : families()) {
      std::string params;
      for (const auto& k : f.params) params += (params.empty() ? "" : ",") + k;
      char line[256];
      std::snprintf(line, sizeof line, "%-14s %-14s %-11s %s\n", f.name.c_str(), params.c_str(),
                    std::string(mode_name(f.mode)).c_str(), f.summary.c_str());
      os << line;
    }
  }
  emit(o, os.str(), out);
  return kOk;
}

int cmd_bound(const ProblemArgs& a, const MomentArgs& ma, const Output& o, std::ostream& out) {
  const BoundResult r = compute_bound(a, resolve_moments(ma));
  emit(o, format_bound(r, o.format), out);
  return kOk;
}

int cmd_premium(const std::string& family, const std::vector<std::string>& raw_params,
                std::optional<double> kappa, const std::string& kappa_grid, const MomentArgs& ma,
                const Output& o, std::ostream& out) {
  if (kappa && !kappa_grid.empty()) throw UsageError("--kappa and --kappa-grid are exclusive");
  const std::vector<double> grid = kappa ? std::vector<double>{*kappa}
                                         : parse_grid(kappa_grid.empty() ? "0:1:11" : kappa_grid);
  const ParamMap params = parse_params(raw_params);
  const MomentInfo m = resolve_moments(ma);
  std::ostringstream os;
  json arr = json::array();
  if (o.format == "csv") os << "family,params,kappa,bound\n";
  for (double k : grid) {
    const double b = premium_bound(family, params, k, m);
    if (o.format == "csv") {
      os << family << ',' << format_params(params) << ',' << format_double(k) << ',' << format_double(b) << '\n';
    } else if (o.format == "json") {
      arr.push_back({{"family", family}, {"params", format_params(params)}, {"kappa", k}, {"bound", b}});
    } else {
      os << "kappa = " << fixed6(k) << "  bound = " << fixed6(b) << '\n';
    }
  }
  if (o.format == "json") os << arr.dump() << '\n';
  emit(o, os.str(), out);
  return kOk;
}

struct ShortfallArgs {
  std::string family;
  std::optional<double> p;
  double tau = 0.0;
  std::optional<double> alpha;
  std::optional<double> r;
  std::string p_grid;
  bool numeric = false;
};

int cmd_shortfall(const ShortfallArgs& a, const MomentArgs& ma, const Output& o, std::ostream& out) {
  if (a.p && !a.p_grid.empty()) throw UsageError("--p and --p-grid are exclusive");
  if (!a.p && a.p_grid.empty()) throw UsageError("give --p or --p-grid");
  if (a.family == "CRTES" && !a.alpha) throw UsageError("CRTES needs --alpha");
  if (a.family == "EGS" && !a.r) throw UsageError("EGS needs --r");
  const MomentInfo m = resolve_moments(ma);
  const std::vector<double> grid = a.p ? std::vector<double>{*a.p} : parse_grid(a.p_grid);
  std::ostringstream os;
  json arr = json::array();
  if (o.format == "csv") os << bound_record_csv_header() << '\n';
  for (double p : grid) {
    ShortfallSpec s;
    s.family = a.family;
    s.p = p;
    s.tau = a.tau;
    s.alpha = a.alpha.value_or(0.0);
    s.r = a.r.value_or(0.0);
    BoundResult r;
    if (a.numeric) {
      BoundOptions opts;
      opts.prefer_analytic = false;
      r = family_bound(s.family, s.params(), m, opts);
    } else {
      r = shortfall_bound(s, m);
    }
    if (o.format == "csv") {
      os << bound_record_csv_row(r) << '\n';
    } else if (o.format == "json") {
      arr.push_back(json::parse(bound_record_json(r)));
    } else {
      if (grid.size() > 1) {
        os << "p = " << fixed6(p) << "  sup = " << fixed6(r.sup_value) << '\n';
      } else {
        os << human_bound(r);
      }
    }
  }
  if (o.format == "json") os << (arr.size() == 1 ? arr[0].dump() : arr.dump()) << '\n';
  emit(o, os.str(), out);
  return kOk;
}

std::string grid_csv(const QuantileSample& s) {
  std::ostringstream os;
  os << "u,Q\n";
  for (std::size_t i = 0; i < s.u.size(); ++i) os << format_double(s.u[i]) << ',' << format_double(s.q[i]) << '\n';
  return os.str();
}

int cmd_quantile(const ProblemArgs& a, const MomentArgs& ma, bool psi_scale, const Output& o,
                 std::ostream& out) {
  const BoundResult r = compute_bound(a, resolve_moments(ma));
  if (r.degenerate) fail(ErrorCode::DegenerateResult, "the worst case is degenerate; no quantile to emit");
  QuantileSample s;
  if (psi_scale) {
    if (!r.weighted_quantile) throw UsageError("--psi-scale applies to weighted families only");
    s = sample_quantile(*r.weighted_quantile, r.knots, {});
  } else {
    s = quantile_grid(r);
  }
  if (o.format == "json") {
    json j;
    j["bound"] = json::parse(bound_record_json(r));
    j["u"] = s.u;
    j["Q"] = s.q;
    emit(o, j.dump() + '\n', out);
    return kOk;
  }
  if (!o.path.empty()) {
    emit(o, grid_csv(s), out);
    out << format_bound(r, o.format);
  } else {
    out << grid_csv(s);
  }
  return kOk;
}

int cmd_envelope(const ProblemArgs& a, int points, const Output& o, std::ostream& out) {
  const Resolved p = resolve_problem(a);
  const TransformedGHat ghat = make_ghat(p.g, p.mode, p.extras);
  const PiecewiseEnvelope env = (!a.numeric && has_analytic_envelope(ghat))
                                    ? convex_envelope_analytic(ghat)
                                    : convex_envelope_numeric(ghat);
  std::ostringstream os;
  write_envelope_csv(os, env, points);
  emit(o, os.str(), out);
  return kOk;
}

std::vector<Check> verify_family(const std::string& family, const ParamMap& params, const MomentInfo& m,
                                 int trials, std::uint64_t seed, const std::string& quantile_path,
                                 std::vector<StressReport>& reports) {
  std::vector<Check> checks;
  const std::string ptext = format_params(params);
  auto add = [&](const std::string& name, double value, double tol) {
    checks.push_back({family, ptext, name, value, tol, value <= tol});
  };
  const Problem prob = catalog_problem(family, params);
  const BoundResult engine = family_bound(family, params, m);

  BoundOptions numeric;
  numeric.prefer_analytic = false;
  const BoundResult hull = family_bound(family, params, m, numeric);
  const double cf = closed_form_sup(family, params, m);
  add("closed_form_vs_numeric", std::abs(hull.sup_value - cf) / std::max(1e-300, std::abs(cf)), 1e-6);

  const std::optional<QuantileFn>& q = prob.weight ? engine.weighted_quantile : engine.quantile;
  if (!engine.degenerate && q) {
    const double value = riskmetric_of_quantile(prob.g, prob.mode, prob.extras, *q);
    add("attainment", rel_err(value, engine.sup_value), 1e-5);
    const QuantileMoments qm = quantile_moments(*q);
    add("mean", std::abs(qm.mean - m.mu) / std::max({1.0, std::abs(m.mu), m.sigma}), 1e-6);
    if (m.sigma > 0.0) add("variance", std::abs(qm.variance - m.sigma * m.sigma) / (m.sigma * m.sigma), 1e-6);
  }

  try {
    reports.push_back(feasibility_stress(prob.g, prob.mode, prob.extras, m, trials, seed));
    reports.back().family = family;
    reports.back().params = params;
    add("dominance", 0.0, 0.0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BoundViolated) throw;
    checks.push_back({family, ptext, "dominance", 1.0, 0.0, false});
  }

  if (!quantile_path.empty()) {
    std::ifstream in(quantile_path);
    if (!in) fail(ErrorCode::FileNotFound, "cannot open '" + quantile_path + "'");
    const QuantileSample s = read_quantile_csv(in);
    const QuantileFn grid = QuantileFn::from_grid(s.u, s.q);
    const double value = riskmetric_of_quantile(prob.g, prob.mode, prob.extras, grid);
    add("grid_attainment", rel_err(value, engine.sup_value), 1e-5);
  }
  return checks;
}

int cmd_verify(const ProblemArgs& a, const MomentArgs& ma, int trials, std::uint64_t seed,
               const std::string& quantile_path, const Output& o, std::ostream& out) {
  const MomentInfo m = resolve_moments(ma, true);
  std::vector<Check> checks;
  std::vector<StressReport> reports;
  if (!a.family.empty()) {
    checks = verify_family(a.family, parse_params(a.params), m, trials, seed, quantile_path, reports);
  } else {
    if (!quantile_path.empty()) throw UsageError("--quantile needs --family");
    for (const FamilyInfo& f : families()) {
      auto c = verify_family(f.name, default_params(f), m, trials, seed, "", reports);
      checks.insert(checks.end(), c.begin(), c.end());
    }
  }
  bool ok = true;
  std::ostringstream os;
  if (o.format == "json") {
    json j;
    json arr = json::array();
    for (const Check& c : checks) {
      arr.push_back({{"family", c.family}, {"params", c.params}, {"check", c.name}, {"value", c.value},
                     {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    j["checks"] = arr;
    json st = json::array();
    for (const StressReport& r : reports) st.push_back(json::parse(stress_report_json(r)));
    j["stress"] = st;
    os << j.dump() << '\n';
  }
  for (const Check& c : checks) {
    ok = ok && c.pass;
    if (o.format == "csv") continue;
    if (o.format == "human") {
      os << (c.pass ? "PASS " : "FAIL ") << c.family << (c.params.empty() ? "" : " " + c.params) << ' '
         << c.name << " err=" << format_double(c.value) << '\n';
    }
  }
  if (o.format == "csv") {
    os << "family,params,check,value,tolerance,pass\n";
    for (const Check& c : checks) {
      os << c.family << ',' << c.params << ',' << c.name << ',' << format_double(c.value) << ','
         << format_double(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
    }
  }
  emit(o, os.str(), out);
  return ok ? kOk : kVerification;
}

int cmd_report(const std::string& kappa_grid, const std::string& p_grid, double tau,
               const std::string& input, const std::vector<std::string>& columns, const std::string& estimator,
               const Output& o, std::ostream& out) {
  std::vector<MomentSet> sets;
  if (!input.empty()) {
    if (columns.empty()) throw UsageError("--input needs at least one --column");
    for (const std::string& c : columns) {
      const ReturnSeries s = load_returns_csv(input, c);
      sets.emplace_back(s.label, sample_moments(s, parse_estimator(estimator)));
    }
  } else {
    sets = stock_moments();
  }
  const Report rep = bound_report(sets, default_premium_families(), default_shortfalls(tau),
                                     parse_grid(kappa_grid), parse_grid(p_grid));
  std::ostringstream os;
  if (o.format == "csv") {
    write_report_csv(os, rep);
  } else if (o.format == "json") {
    json arr = json::array();
    for (const ReportRow& r : rep.rows) {
      arr.push_back({{"label", r.label}, {"family", r.family}, {"params", r.params}, {"grid_var", r.grid_var},
                     {"grid_value", r.grid_value}, {"bound", r.bound}});
    }
    os << arr.dump() << '\n';
  } else {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-8s %-22s %-6s %10s %12s\n", "label", "family", "params", "var",
                  "value", "bound");
    os << line;
    for (const ReportRow& r : rep.rows) {
      std::snprintf(line, sizeof line, "%-6s %-8s %-22s %-6s %10s %12s\n", r.label.c_str(), r.family.c_str(),
                    r.params.c_str(), r.grid_var.c_str(), fixed6(r.grid_value).c_str(), fixed6(r.bound).c_str());
      os << line;
    }
  }
  emit(o, os.str(), out);
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundViolated:
      return kVerification;
    case ErrorCode::UnknownFamily:
    case ErrorCode::InvalidArgument:
      return kUsage;
    default:
      return kDomain;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp worst-case bounds for distortion riskmetrics and entropies under mean-variance information",
               "riskbound"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Output o;
  MomentArgs ma;
  ProblemArgs pa;

  auto* families_cmd = app.add_subcommand("families", "List catalog families");
  add_output(families_cmd, o);

  auto* bound_cmd = app.add_subcommand("bound", "Sharp upper bound for a family");
  add_problem(bound_cmd, pa);
  add_moments(bound_cmd, ma);
  add_output(bound_cmd, o);

  std::string premium_family;
  std::vector<std::string> premium_params;
  std::optional<double> kappa;
  std::string kappa_grid;
  auto* premium_cmd = app.add_subcommand("premium", "Bound of an entropy-loaded premium principle");
  premium_cmd->add_option("--family", premium_family, "Premium name such as BGini or BCT, or the base entropy")
      ->required();
  premium_cmd->add_option("--param", premium_params, "Parameter key=value (repeatable)");
  premium_cmd->add_option("--kappa", kappa, "Loading kappa >= 0");
  premium_cmd->add_option("--kappa-grid", kappa_grid, "Loading grid a:b:n (default 0:1:11)");
  add_moments(premium_cmd, ma);
  add_output(premium_cmd, o);

  ShortfallArgs sa;
  auto* shortfall_cmd = app.add_subcommand("shortfall", "Bound of an entropy-based shortfall");
  shortfall_cmd->add_option("--family", sa.family, "ES, GS, EGS, CRES or CRTES")
      ->required()
      ->check(CLI::IsMember({"ES", "GS", "EGS", "CRES", "CRTES"}));
  shortfall_cmd->add_option("--p", sa.p, "Level p in (0,1)");
  shortfall_cmd->add_option("--p-grid", sa.p_grid, "Level grid a:b:n");
  shortfall_cmd->add_option("--tau", sa.tau, "Loading tau >= 0");
  shortfall_cmd->add_option("--alpha", sa.alpha, "CRTES exponent");
  shortfall_cmd->add_option("--r", sa.r, "EGS exponent");
  shortfall_cmd->add_flag("--numeric", sa.numeric, "Use the numeric hull instead of the closed form");
  add_moments(shortfall_cmd, ma);
  add_output(shortfall_cmd, o);

  bool psi_scale = false;
  auto* quantile_cmd = app.add_subcommand("quantile", "Worst-case quantile grid as CSV (u,Q)");
  add_problem(quantile_cmd, pa);
  add_moments(quantile_cmd, ma);
  add_output(quantile_cmd, o);
  quantile_cmd->add_flag("--psi-scale", psi_scale, "Emit Psi(Q) for weighted families");

  int points = 1001;
  auto* envelope_cmd = app.add_subcommand("envelope", "Convex envelope as CSV (u,ghat,envelope,slope)");
  add_problem(envelope_cmd, pa);
  add_output(envelope_cmd, o);
  envelope_cmd->add_option("--points", points, "Uniform sample count")->check(CLI::Range(2, 10000000));

  int trials = 1000;
  std::uint64_t seed = 1;
  std::string quantile_path;
  auto* verify_cmd = app.add_subcommand("verify", "Attainment and dominance checks (all families by default)");
  add_problem(verify_cmd, pa, false);
  add_moments(verify_cmd, ma);
  add_output(verify_cmd, o);
  verify_cmd->add_option("--trials", trials, "Random feasible distributions per family")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--quantile", quantile_path, "Also evaluate a quantile grid CSV against the bound");

  std::string report_kappa = "0:1:11";
  std::string report_p = "0.9:0.99:10";
  double report_tau = 0.5;
  std::string report_input;
  std::vector<std::string> report_columns;
  std::string report_estimator = "population";
  auto* report_cmd = app.add_subcommand("report", "Premium and shortfall bound tables over kappa and p grids");
  report_cmd->add_option("--kappa-grid", report_kappa, "Loading grid a:b:n");
  report_cmd->add_option("--p-grid", report_p, "Level grid a:b:n");
  report_cmd->add_option("--tau", report_tau, "Shortfall loading");
  report_cmd->add_option("--input", report_input, "CSV of returns; default uses built-in moments");
  report_cmd->add_option("--column", report_columns, "Return column (repeatable)");
  report_cmd->add_option("--estimator", report_estimator, "population or sample variance")
      ->check(CLI::IsMember({"population", "sample"}));
  add_output(report_cmd, o);

  CLI::App* active = &app;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "riskbound: " << e.what() << '\n' << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }
  active = app.get_subcommands().front();

  try {
    if (active == families_cmd) return cmd_families(o, out);
    if (active == bound_cmd) return cmd_bound(pa, ma, o, out);
    if (active == premium_cmd) {
      return cmd_premium(premium_family, premium_params, kappa, kappa_grid, ma, o, out);
    }
    if (active == shortfall_cmd) return cmd_shortfall(sa, ma, o, out);
    if (active == quantile_cmd) return cmd_quantile(pa, ma, psi_scale, o, out);
    if (active == envelope_cmd) return cmd_envelope(pa, points, o, out);
    if (active == verify_cmd) return cmd_verify(pa, ma, trials, seed, quantile_path, o, out);
    return cmd_report(report_kappa, report_p, report_tau, report_input, report_columns, report_estimator, o,
                      out);
  } catch (const UsageError& e) {
    err << "riskbound: " << e.what() << '\n' << active->help();
    return kUsage;
  } catch (const Error& e) {
    err << "riskbound: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    const int code = exit_code_for(e.code());
    if (code == kUsage) err << active->help();
    return code;
  } catch (const std::exception& e) {
    err << "riskbound: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace riskbound::cli
