// Serial reference vs OpenMP path for the kernels that fan out over slices,
// bands or columns.  Arg 0 = serial, 1 = parallel; BVLAB_WORKERS sets the width.
#include <benchmark/benchmark.h>

#include "bvlab/acceptance.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/estimates.hpp"
#include "bvlab/heat_lp.hpp"
#include "bvlab/parallel.hpp"

using namespace bvlab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

const SpaceTimeField& flat_field() {
    static const SpaceTimeField u = [] {
        auto run = smoothing_run();
        return flat_group(run.u0, Grid{0.0, 1.0 / 256.0, 257});
    }();
    return u;
}

void BM_flat_group(benchmark::State& st) {
    auto run = smoothing_run();
    const Grid tg{0.0, 1.0 / 256.0, 257};
    for (auto _ : st) benchmark::DoNotOptimize(flat_group(run.u0, tg, exec_of(st)));
}

void BM_smoothing_numerator(benchmark::State& st) {
    const auto& u = flat_field();
    for (auto _ : st) benchmark::DoNotOptimize(smoothing_numerator(u, 0.0, exec_of(st)));
}

void BM_maximal_norm(benchmark::State& st) {
    const auto& u = flat_field();
    const MixedNormSpec spec{Outer::x, 4.0, INFINITY, BesovWeight{-0.25}};
    for (auto _ : st) benchmark::DoNotOptimize(mixed_norm(u, spec, exec_of(st)));
}

void BM_kernel_matrix(benchmark::State& st) {
    const Grid g{-8.0, 0.01, 1601};
    auto op = build_divergence_operator(StepCoefficient({0.0}, {1.0, 4.0}), g, Boundary::dirichlet);
    for (auto _ : st) benchmark::DoNotOptimize(kernel_matrix(op, 0.1, exec_of(st)));
}

void BM_uniformity_sweep(benchmark::State& st) {
    auto run = smoothing_run(1.0 / 16.0);
    run.opt.exec = exec_of(st);
    FamilySpec fam;
    fam.n_jumps = {1, 4, 16};
    for (auto _ : st) benchmark::DoNotOptimize(uniformity_sweep(fam, EstimateKind::smoothing, {}, run.u0, run.opt));
}

void BM_metric_piece_norms(benchmark::State& st) {
    static const SingularMetric beta(floquet_mode(named_hill_profile("resonant")), kMaxScales);
    for (auto _ : st) benchmark::DoNotOptimize(beta.piece_norms(1 << 14, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_flat_group)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_smoothing_numerator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximal_norm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_uniformity_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_metric_piece_norms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    configure_workers();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
