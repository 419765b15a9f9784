#include <benchmark/benchmark.h>

#include "riskbound/bounds.hpp"
#include "riskbound/catalog.hpp"
#include "riskbound/envelope.hpp"
#include "riskbound/oracle.hpp"
#include "riskbound/stress.hpp"

using namespace riskbound;

namespace {

TransformedGHat fgre3() {
  const Problem p = catalog_problem("FGRE", {{"alpha", 3.0}});
  return make_ghat(p.g, p.mode, p.extras);
}

void BM_EnvelopeNumeric(benchmark::State& state) {
  const TransformedGHat g = fgre3();
  for (auto _ : state) benchmark::DoNotOptimize(convex_envelope_numeric(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnvelopeNumeric)->Arg(1025)->Arg(4097)->Arg(16385);

void BM_EnvelopeAnalytic(benchmark::State& state) {
  const TransformedGHat g = fgre3();
  for (auto _ : state) benchmark::DoNotOptimize(convex_envelope_analytic(g));
}
BENCHMARK(BM_EnvelopeAnalytic);

void BM_ClosedForm(benchmark::State& state) {
  const MomentInfo m{0.0, 1.0, false};
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_sup("TCRE", {{"p", 0.9}}, m));
}
BENCHMARK(BM_ClosedForm);

void BM_FamilyBound(benchmark::State& state) {
  const MomentInfo m{0.0, 1.0, false};
  BoundOptions o;
  o.prefer_analytic = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(family_bound("TCRE", {{"p", 0.9}}, m, o).sup_value);
}
BENCHMARK(BM_FamilyBound)->Arg(0)->Arg(1);

void BM_OracleAttainment(benchmark::State& state) {
  const BoundResult r = family_bound("CRE", {}, {0.0, 1.0, false});
  const Problem p = catalog_problem("CRE", {});
  for (auto _ : state) benchmark::DoNotOptimize(riskmetric_of_quantile(p.g, p.mode, p.extras, *r.quantile));
}
BENCHMARK(BM_OracleAttainment);

void BM_Stress(benchmark::State& state) {
  const MomentInfo m{0.0, 1.0, false};
  for (auto _ : state) benchmark::DoNotOptimize(family_stress("CT", {{"alpha", 2.0}}, m, 100, 1).gap);
}
BENCHMARK(BM_Stress);

}  // namespace

BENCHMARK_MAIN();
