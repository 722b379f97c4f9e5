#include "ldgbem/bem_ops.hpp"
#include "ldgbem/coupled_system.hpp"
#include "ldgbem/log_kernel.hpp"
#include "ldgbem/manufactured_errors.hpp"

#include <benchmark/benchmark.h>

using namespace ldgbem;

namespace {

void BM_LogIntegralsIdentical(benchmark::State& state)
{
    const Segment a{{0.1, 0.2}, {0.4, 0.6}};
    for (auto _ : state)
        benchmark::DoNotOptimize(log_segment_integrals(a, 1, a, 1));
}
BENCHMARK(BM_LogIntegralsIdentical);

void BM_LogIntegralsAngled(benchmark::State& state)
{
    const Segment a{{0.0, 0.0}, {0.3, 0.0}}, b{{0.3, 0.0}, {0.3, 0.2}};
    for (auto _ : state)
        benchmark::DoNotOptimize(log_segment_integrals(a, 1, b, 1));
}
BENCHMARK(BM_LogIntegralsAngled);

void BM_DoubleLayerDisjoint(benchmark::State& state)
{
    const Segment a{{0.0, 0.0}, {0.3, 0.0}}, b{{0.5, 0.1}, {0.6, 0.4}};
    for (auto _ : state)
        benchmark::DoNotOptimize(double_layer_segment_integrals(a, 1, b, 1));
}
BENCHMARK(BM_DoubleLayerDisjoint);

void BM_SegmentOperators(benchmark::State& state)
{
    const TriangleMesh mesh = build_uniform_square_mesh(static_cast<int>(state.range(0)));
    const BoundaryMesh bmesh = build_boundary_mesh(mesh, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_segment_operators(bmesh));
    state.counters["segments"] = static_cast<double>(bmesh.num_segments());
}
BENCHMARK(BM_SegmentOperators)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_BuildSystem(benchmark::State& state)
{
    SchemeConfig c;
    c.level = static_cast<int>(state.range(0));
    const ProblemData data = exact_fields().data();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_system(c, data));
}
BENCHMARK(BM_BuildSystem)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state)
{
    SchemeConfig c;
    c.scheme = state.range(1) ? Scheme::conforming_bem : Scheme::dg_bem;
    c.level = static_cast<int>(state.range(0));
    const BlockSystem sys = build_system(c, exact_fields().data());
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(sys));
    state.counters["unknowns"] = static_cast<double>(sys.matrix.rows());
}
BENCHMARK(BM_Solve)->ArgsProduct({{2, 3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
