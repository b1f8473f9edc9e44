#include "hartree/checks.hpp"
#include "hartree/coulomb.hpp"
#include "hartree/diatomic.hpp"
#include "hartree/mono.hpp"
#include "hartree/multipole.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace hartree;
using std::numbers::pi;

namespace {

ModelParams model(int d) {
    ModelParams p;
    p.d = d;
    return p;
}

std::shared_ptr<const RadialGrid> radial(double r_max, int n, int d) {
    return std::make_shared<const RadialGrid>(make_radial_grid(r_max, n, d));
}

void BM_RadialPotential(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto g = radial(40, static_cast<int>(state.range(1)), d);
    const auto rho = sample(g, [](double r) { return std::exp(-r * r / 2); });
    for (auto _ : state) benchmark::DoNotOptimize(radial_potential(rho, d));
}
BENCHMARK(BM_RadialPotential)->Args({2, 500})->Args({2, 1000})->Args({3, 2000})->Args({3, 8000})
    ->Unit(benchmark::kMillisecond);

void BM_MonoSCF(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto g = radial(d == 2 ? 60 : 120, static_cast<int>(state.range(1)), d);
    for (auto _ : state) benchmark::DoNotOptimize(solve_monoatomic(model(d), g));
}
BENCHMARK(BM_MonoSCF)->Args({2, 1000})->Args({3, 2000})->Unit(benchmark::kMillisecond);

void BM_GridPotential(benchmark::State& state) {
    const double h = 32.0 / static_cast<double>(state.range(0));
    const auto grid = std::make_shared<const CartesianGrid>(make_cartesian_grid(2, {16, 16, 0}, h));
    const auto rho = sample(grid, [](const std::array<double, 3>& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
    const GridCoulomb coulomb(grid);
    for (auto _ : state) benchmark::DoNotOptimize(coulomb.apply(rho.values));
}
BENCHMARK(BM_GridPotential)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Diatomic(benchmark::State& state) {
    const auto mono = solve_monoatomic(model(2), radial(60, 1000, 2));
    const double L = static_cast<double>(state.range(0)), h = 0.5;
    const double margin = 10 / std::sqrt(-mono.mu);
    const auto grid = std::make_shared<const CartesianGrid>(
        make_cartesian_grid(2, {L / 2 + margin + h, margin + h, 0}, h));
    const auto ref = solve_grid_mono(model(2), grid, mono);
    for (auto _ : state) benchmark::DoNotOptimize(solve_diatomic(model(2), grid, mono, L, {}, {}, &ref));
}
BENCHMARK(BM_Diatomic)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_ConvolutionDecay(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(convolution_decay_check(1.0, 0.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ConvolutionDecay)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MultipoleCoefficients(benchmark::State& state) {
    const auto g = radial(40, 2000, 2);
    const auto rho = sample(g, [](double r) { return std::exp(-r * r / 2) / (2 * pi); });
    for (auto _ : state) benchmark::DoNotOptimize(radial_coeffs(rho, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_MultipoleCoefficients)->Arg(3)->Arg(8);

} // namespace

BENCHMARK_MAIN();
