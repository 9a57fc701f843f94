// Serial reference kernels against the OpenMP ones. Thread count follows
// OMP_NUM_THREADS / ORLICZ_FLOW_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>

#include "orlicz/kernels.hpp"

using namespace orlicz;

namespace {

GridPtr grid_for(const benchmark::State& state) {
    return build_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
}

std::vector<double> sample_h(const SphereGrid& grid) {
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec3& x = grid.node(i);
        h[i] = std::sqrt(2.25 * x[0] * x[0] + 0.49 * x[1] * x[1] + x[2] * x[2]);
    }
    return h;
}

template <auto Geometry>
void support_geometry(benchmark::State& state) {
    const auto grid = grid_for(state);
    const auto h = sample_h(*grid);
    SupportGeometry geo;
    for (auto _ : state) {
        Geometry(*grid, h, geo);
        benchmark::DoNotOptimize(geo.det_b.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->size()));
}

template <auto Fields>
void flow_fields(benchmark::State& state) {
    const auto grid = grid_for(state);
    const auto h = sample_h(*grid);
    const std::vector<double> g(grid->size(), 1.0);
    const auto phi = PhiModel::reciprocal();
    SupportGeometry geo;
    kernels::serial::support_geometry(*grid, h, geo);
    FlowFields out;
    for (auto _ : state) {
        Fields(*grid, geo, {h, g, &phi, PhiArgument::radial, false}, out);
        benchmark::DoNotOptimize(out.speed.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->size()));
}

void sizes(benchmark::internal::Benchmark* b) {
    b->Args({2, 4096})->Args({2, 65536})->Args({3, 64})->Args({3, 256});
}

}  // namespace

BENCHMARK(support_geometry<kernels::serial::support_geometry>)->Name("support_geometry/serial")->Apply(sizes);
BENCHMARK(support_geometry<kernels::omp::support_geometry>)->Name("support_geometry/omp")->Apply(sizes);
BENCHMARK(flow_fields<kernels::serial::flow_fields>)->Name("flow_fields/serial")->Apply(sizes);
BENCHMARK(flow_fields<kernels::omp::flow_fields>)->Name("flow_fields/omp")->Apply(sizes);

int main(int argc, char** argv) {
    configure_threads_from_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
