#include <benchmark/benchmark.h>

#include <map>
#include <variant>

#include "sweeporder/depgraph.hpp"
#include "sweeporder/meshgen.hpp"
#include "sweeporder/sweep.hpp"

using namespace sweeporder;

namespace {

// One jittered mesh and adjacency per grid size, shared across benchmarks.
const Mesh& mesh_for(int n) {
    static std::map<int, Mesh> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        Mesh mesh = jitter(structured_triangulation(n, n, DiagonalPattern::Random, 1),
                           JitterSpec{0.3, 2});
        it = cache.emplace(n, std::move(mesh)).first;
    }
    return it->second;
}

const EdgeAdjacency& adjacency_for(int n) {
    static std::map<int, EdgeAdjacency> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_adjacency(mesh_for(n))).first;
    }
    return it->second;
}

const Direction kOmega = Direction::from_angle(0.43);

}  // namespace

static void bm_build_adjacency(benchmark::State& state) {
    const Mesh& mesh = mesh_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        EdgeAdjacency adjacency = build_adjacency(mesh);
        benchmark::DoNotOptimize(adjacency);
    }
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(bm_build_adjacency)->Arg(16)->Arg(64)->Arg(256);

static void bm_build_graph(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    const Mesh& mesh = mesh_for(n);
    const EdgeAdjacency& adjacency = adjacency_for(n);
    for (auto _ : state) {
        DependencyGraph graph = build_graph(mesh, adjacency, kOmega);
        benchmark::DoNotOptimize(graph);
    }
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(bm_build_graph)->Arg(16)->Arg(64)->Arg(256);

static void bm_topo_sort(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    DependencyGraph graph = build_graph(mesh_for(n), adjacency_for(n), kOmega);
    for (auto _ : state) {
        auto sorted = topo_sort(graph);
        benchmark::DoNotOptimize(sorted);
    }
    state.SetItemsProcessed(state.iterations() * graph.num_cells());
}
BENCHMARK(bm_topo_sort)->Arg(16)->Arg(64)->Arg(256);

static void bm_level_schedule(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    DependencyGraph graph = build_graph(mesh_for(n), adjacency_for(n), kOmega);
    for (auto _ : state) {
        auto scheduled = level_schedule(graph);
        benchmark::DoNotOptimize(scheduled);
    }
    state.SetItemsProcessed(state.iterations() * graph.num_cells());
}
BENCHMARK(bm_level_schedule)->Arg(16)->Arg(64)->Arg(256);

static void bm_sweep_solve(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    const Mesh& mesh = mesh_for(n);
    const EdgeAdjacency& adjacency = adjacency_for(n);
    auto sorted = topo_sort(build_graph(mesh, adjacency, kOmega));
    const SweepOrder& order = std::get<SweepOrder>(sorted);
    TransportProblem problem = uniform_problem(mesh.num_cells(), 1.0, 0.5, 1.0, kOmega);
    for (auto _ : state) {
        FluxField field = sweep_solve(mesh, adjacency, order, problem);
        benchmark::DoNotOptimize(field);
    }
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(bm_sweep_solve)->Arg(16)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
