#include "mcln/circuit.hpp"
#include "mcln/lattice.hpp"
#include "mcln/synthesis.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

mcln::DesignResult design(int lines)
{
    mcln::DesignSpec s;
    s.num_lines = lines;
    s.kappa_max = 2.0;
    s.effective_permittivity = 1.86;
    return mcln::synthesize_design(s);
}

template <bool Parallel>
void sweep(benchmark::State& state)
{
    const auto d = design(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = Parallel ? mcln::frequency_sweep(d.cell_params, 2e9, 3e9, 64)
                          : mcln::frequency_sweep_serial(d.cell_params, 2e9, 3e9, 64);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}

template <bool Parallel>
void evolution(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto H = mcln::coupled_mode_matrix({m, 1.0, 0.0, 0.0});
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(m);
    x(0) = 1.0;
    std::vector<double> z(512);
    for (std::size_t k = 0; k < z.size(); ++k) {
        z[k] = 0.01 * static_cast<double>(k);
    }
    for (auto _ : state) {
        auto r = Parallel ? mcln::field_evolution(H, x, z) : mcln::field_evolution_serial(H, x, z);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}

} // namespace

BENCHMARK(sweep<false>)->Name("frequency_sweep/serial")->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<true>)->Name("frequency_sweep/openmp")->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(evolution<false>)->Name("field_evolution/serial")->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(evolution<true>)->Name("field_evolution/openmp")->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
