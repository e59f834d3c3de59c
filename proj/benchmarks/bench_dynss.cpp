// bench_dynss.cpp — Hot paths: Hilbert transform, residue solve, renormalization, oracle steps

#include <cmath>

#include <benchmark/benchmark.h>

#include "dynss/oracle.hpp"
#include "dynss/poles.hpp"
#include "dynss/renorm.hpp"
#include "dynss/sweep.hpp"

using namespace dynss;

namespace {

BareFrame bare_at(double bias) {
    DQDParams p;
    p.bias = bias;
    return bare_frame(p);
}

} // namespace

// Uncached F at varying arguments.
static void BM_EvalF(benchmark::State& state) {
    const BathSpectrum bath{};
    double x = -1.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_F(x, bath));
        x += 1e-3;
        if (x > 1.7) x = -1.7;
    }
}
BENCHMARK(BM_EvalF)->Unit(benchmark::kMicrosecond);

static void BM_BathCorrelation(benchmark::State& state) {
    const BathSpectrum bath{};
    double t = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bath_correlation(t, bath));
        t += 0.05;
        if (t > 100.0) t = 0.05;
    }
}
BENCHMARK(BM_BathCorrelation);

// Assembly plus solve with a warm F cache, the per-point cost inside a sweep.
static void BM_ResidueSolve(benchmark::State& state) {
    const PiezoSpectrum spec{BathSpectrum{}};
    const BareFrame bare = bare_at(0.93);
    const RenormSolution s = solve_self_consistent(bare, bare.theta, spec);
    const CouplingTable t = coupling_table(bare.theta, s.frame);
    const DispersiveCoeffs d = dispersive_coeffs(bare.theta, s.frame, bare, spec);
    for (auto _ : state) {
        const ResidueSet r = solve_residues(assemble_system(t, d, s.frame, spec));
        benchmark::DoNotOptimize(r.residues.data());
    }
}
BENCHMARK(BM_ResidueSolve)->Unit(benchmark::kMicrosecond);

// Cold-cache renormalization from the default seed.
static void BM_Renormalize(benchmark::State& state) {
    const BareFrame bare = bare_at(0.93);
    for (auto _ : state) {
        const PiezoSpectrum spec{BathSpectrum{}};
        benchmark::DoNotOptimize(solve_self_consistent(bare, bare.theta, spec).frame.detuning);
    }
}
BENCHMARK(BM_Renormalize)->Unit(benchmark::kMillisecond);

static void BM_SweepFull(benchmark::State& state) {
    SweepConfig cfg;
    cfg.steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg).size());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SweepFull)->Arg(32)->Unit(benchmark::kMillisecond);

// Oracle cost per unit of simulated time at the default step and window.
static void BM_OracleSteps(benchmark::State& state) {
    BathSpectrum bath;
    bath.coupling = 0.02;
    const BareFrame bare = bare_at(0.94);
    const RenormSolution s = solve_self_consistent(bare, bare.theta, bath);
    TrajectoryConfig cfg;
    cfg.t_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        const Trajectory tr = propagate_tc2(bare, bare.theta, s.frame, bath, cfg);
        benchmark::DoNotOptimize(tr.rho.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.t_max / cfg.dt));
}
BENCHMARK(BM_OracleSteps)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
