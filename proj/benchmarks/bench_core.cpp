// bench_core.cpp — Micro benchmarks of the expensive kernels

#include <benchmark/benchmark.h>

#include "xblockade/fock_oracle.hpp"
#include "xblockade/self_energy.hpp"
#include "xblockade/two_photon.hpp"

namespace {

using namespace xblockade;

model::SystemParams fig3_like(double u)
{
    model::SystemParams p;
    p.g_c = 20.0;
    p.kappa_c = 0.1;
    p.delta_c = 100.0;
    p.u_xx = u;
    return p;
}

const disorder::SelfEnergyTable& table()
{
    static const auto tbl = disorder::scba_self_energy(disorder::DisorderParams::with_default_grid(1.4739434812674508));
    return tbl;
}

void BM_ExpIntegral(benchmark::State& state)
{
    disorder::cplx w(-0.7, -0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(disorder::scaled_exp_integral(w));
        w += 1e-9;
    }
}
BENCHMARK(BM_ExpIntegral);

void BM_ScbaTable(benchmark::State& state)
{
    const auto dp = disorder::DisorderParams::with_default_grid(1.4739434812674508);
    for (auto _ : state) benchmark::DoNotOptimize(disorder::scba_self_energy(dp));
}
BENCHMARK(BM_ScbaTable)->Unit(benchmark::kMillisecond);

void BM_PairBubble(benchmark::State& state)
{
    const auto& tbl = table();
    const auto p = fig3_like(0.02);
    const two_photon::CavityExcitonModes modes(p, &tbl);
    const double e = 2.0 * -4.2044576;
    for (auto _ : state) benchmark::DoNotOptimize(two_photon::pair_bubble(e, modes));
}
BENCHMARK(BM_PairBubble)->Unit(benchmark::kMillisecond);

void BM_G2Curve(benchmark::State& state)
{
    const auto& tbl = table();
    const auto p = fig3_like(0.02);
    const auto tau = two_photon::uniform_tau_grid(6000.0, 2048);
    for (auto _ : state) benchmark::DoNotOptimize(two_photon::g2_curve(tau, p, &tbl));
}
BENCHMARK(BM_G2Curve)->Unit(benchmark::kMillisecond);

void BM_OracleSteadyState(benchmark::State& state)
{
    const auto bath = oracle::fit_bath(table(), static_cast<std::size_t>(state.range(0)));
    const auto net = oracle::cavity_exciton_network(fig3_like(0.02), bath);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::steady_state(net, -4.2044576));
}
BENCHMARK(BM_OracleSteadyState)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
