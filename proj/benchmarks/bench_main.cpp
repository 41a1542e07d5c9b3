#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <cgur/cgur.hpp>

using namespace cgur;

namespace {

// Fresh evaluator per iteration so the memo does not hide the eigenproblem.
void BM_R00Cold(benchmark::State& st) {
    const double x = static_cast<double>(st.range(0));
    for (auto _ : st) {
        const ProlateEvaluator ev;
        benchmark::DoNotOptimize(ev.r00(x));
    }
}
BENCHMARK(BM_R00Cold)->Arg(1)->Arg(10)->Arg(100);

void BM_R00Memo(benchmark::State& st) {
    double x = 2.0;
    for (auto _ : st) benchmark::DoNotOptimize(r00(x));
}
BENCHMARK(BM_R00Memo);

void BM_KofT(benchmark::State& st) {
    double t = 1e-3;
    for (auto _ : st) {
        benchmark::DoNotOptimize(K_of_t(t));
        t = t > 1e3 ? 1e-3 : t * 1.37;
    }
}
BENCHMARK(BM_KofT);

void BM_BinGaussian(benchmark::State& st) {
    const GaussianMarginal g{0.2, 1.0};
    const double delta = 1.0 / static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(bin_probabilities(g, StandardCG(delta)));
}
BENCHMARK(BM_BinGaussian)->Arg(1)->Arg(100);

void BM_BinGrid(benchmark::State& st) {
    const auto grid = GridSpec::centred(static_cast<std::size_t>(st.range(0)), 0.01);
    std::vector<double> v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) v[j] = GaussianMarginal{0.0, 1.0}.pdf(grid.at(j));
    const auto d = GridDensity::sub_normalized(std::move(v), grid);
    for (auto _ : st) benchmark::DoNotOptimize(bin_probabilities(d, StandardCG(0.37, 0.05)));
}
BENCHMARK(BM_BinGrid)->Arg(4096)->Arg(65536);

void BM_ConjugateTransform(benchmark::State& st) {
    const auto grid = GridSpec::balanced(static_cast<std::size_t>(st.range(0)), 1.0);
    std::vector<cplx> v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) v[j] = std::exp(-grid.at(j) * grid.at(j) / 2);
    const auto psi = GridWavefunction::normalized(std::move(v), grid);
    for (auto _ : st) benchmark::DoNotOptimize(conjugate_wavefunction(psi));
}
BENCHMARK(BM_ConjugateTransform)->Arg(4096)->Arg(65536);

void BM_Frft(benchmark::State& st) {
    const auto grid = GridSpec::balanced(4096, 1.0);
    const auto psi = FockSuperposition({0.6, 0.0, cplx(0.0, 0.8)}).to_grid(grid);
    for (auto _ : st) benchmark::DoNotOptimize(frft(psi, 0.7));
}
BENCHMARK(BM_Frft);

void BM_CgEntropicUr(benchmark::State& st) {
    const GaussianMarginal g{0.0, 0.5};
    const CGPair cgp(0.5, 0.5, QuadraturePair::canonical());
    const auto d = bin_probabilities(g, StandardCG(0.5));
    for (auto _ : st) benchmark::DoNotOptimize(cg_entropic_ur(d, d, cgp, ConjugatePair(1.0)));
}
BENCHMARK(BM_CgEntropicUr);

void BM_UnbiasednessTest(benchmark::State& st) {
    const double t = std::sqrt(2 * std::numbers::pi * 3);
    const auto u = PeriodicCG::from_period(t / 3, t);
    for (auto _ : st) benchmark::DoNotOptimize(unbiasedness_test(u, u, 4, 1));
}
BENCHMARK(BM_UnbiasednessTest)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
