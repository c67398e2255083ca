#include <benchmark/benchmark.h>

#include "remlab/analytic_bk.hpp"
#include "remlab/analytic_grem.hpp"
#include "remlab/analytic_rem.hpp"
#include "remlab/external_field.hpp"
#include "remlab/simulator.hpp"

using namespace remlab;

namespace {

void BM_RemGaussian(benchmark::State& state) {
    double b = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rem_gaussian(b));
        b = b > 3.0 ? 0.0 : b + 0.01;
    }
}
BENCHMARK(BM_RemGaussian);

void BM_RemVariational(benchmark::State& state) {
    RateFunction rf = RateFunction::power_gamma(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(rem_variational(rf, ObjectiveFn{}, 1.3));
}
BENCHMARK(BM_RemVariational);

void BM_GremClosedForm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> p(n, 1.0 / n), a;
    for (int i = 0; i < n; ++i) a.push_back(1.0 + 0.1 * i);
    GremSpec s = GremSpec::uniform(p, a, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(grem_energy(s, 1.7));
}
BENCHMARK(BM_GremClosedForm)->Arg(2)->Arg(8)->Arg(32);

void BM_GremVariational(benchmark::State& state) {
    GremSpec s = GremSpec::per_level({0.3, 0.7}, {1.0, 2.0}, {1.5, 3.0});
    for (auto _ : state) benchmark::DoNotOptimize(grem_variational(s, 1.2));
}
BENCHMARK(BM_GremVariational);

void BM_BkEnergyMin(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    BkSpec s;
    s.n = n;
    s.p.assign(n, 1.0 / n);
    for (SymbolSet m = 1; m <= s.full(); ++m) s.weights[m] = 0.1 + 0.01 * m;
    for (auto _ : state) benchmark::DoNotOptimize(bk_energy_min(s, 1.5));
}
BENCHMARK(BM_BkEnergyMin)->DenseRange(2, 6, 2);

void BM_BkChain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    BkSpec s;
    s.n = n;
    s.p.assign(n, 1.0 / n);
    for (SymbolSet m = 1; m <= s.full(); ++m) s.weights[m] = 0.1 + 0.01 * m;
    for (auto _ : state) benchmark::DoNotOptimize(bk_chain(s));
}
BENCHMARK(BM_BkChain)->DenseRange(2, 8, 2);

void BM_FieldEnergy(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rem_field_energy(1.0, 0.5, 0.3));
}
BENCHMARK(BM_FieldEnergy);

void BM_SimulateRem(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    SimOptions opt;
    opt.seed = 1;
    opt.betas = {0.5, 1.5};
    opt.threads = 1;
    SimModel m = SimModel::of(RemModel{RemModel::Kind::Gaussian});
    for (auto _ : state) benchmark::DoNotOptimize(simulate(m, N, opt));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << N));
}
BENCHMARK(BM_SimulateRem)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);

void BM_SimulateGrem(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    SimOptions opt;
    opt.seed = 1;
    opt.betas = {1.0};
    opt.threads = 1;
    SimModel m = SimModel::of(GremSpec::uniform({0.5, 0.5}, {1.0, 0.5}, 2.0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(m, N, opt));
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << N));
}
BENCHMARK(BM_SimulateGrem)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
