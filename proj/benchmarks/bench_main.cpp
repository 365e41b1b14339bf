#include <benchmark/benchmark.h>

#include "lso/eval.hpp"
#include "lso/graph.hpp"
#include "lso/library_formulas.hpp"
#include "lso/oracles.hpp"
#include "lso/reductions.hpp"
#include "lso/structure.hpp"

using namespace lso;

namespace {

LabeledGraph cycle(int n, const std::string& label = "") {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i), label);
    for (int i = 0; i < n; ++i)
        g.add_edge("n" + std::to_string(i), "n" + std::to_string((i + 1) % n));
    return g;
}

// chain of triangles sharing corners: 3-chromatic, size scales linearly
LabeledGraph triangle_chain(int len) {
    LabeledGraph g;
    auto name = [](int i) { return "t" + std::to_string(i); };
    g.add_node(name(0));
    for (int i = 0; i < len; ++i) {
        g.add_node(name(2 * i + 1));
        g.add_node(name(2 * i + 2));
        g.add_edge(name(2 * i), name(2 * i + 1));
        g.add_edge(name(2 * i), name(2 * i + 2));
        g.add_edge(name(2 * i + 1), name(2 * i + 2));
    }
    return g;
}

void bm_structural_representation(benchmark::State& state) {
    auto g = cycle(static_cast<int>(state.range(0)), "1011");
    for (auto _ : state) benchmark::DoNotOptimize(structural_representation(g));
}

void bm_generate_small_ids(benchmark::State& state) {
    auto g = triangle_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(generate_small_ids(g, 1, 0));
}

void bm_evaluate_colorable3(benchmark::State& state) {
    auto f = library_formula("colorable3");
    auto s = structural_representation(cycle(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(s, f));
}

void bm_oracle_colorable(benchmark::State& state) {
    auto g = triangle_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(oracle_colorable(g, 3));
}

void bm_oracle_hamiltonian(benchmark::State& state) {
    auto g = cycle(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(oracle_hamiltonian(g));
}

void bm_reduce_allselected_to_hamiltonian(benchmark::State& state) {
    auto g = triangle_chain(static_cast<int>(state.range(0)));
    auto ids = generate_small_ids(g, 1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(reduce_allselected_to_hamiltonian(g, ids));
}

void bm_enumerate_graphs(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_graphs(static_cast<int>(state.range(0)), {""}));
}

BENCHMARK(bm_structural_representation)->Arg(8)->Arg(64);
BENCHMARK(bm_generate_small_ids)->Arg(4)->Arg(16);
BENCHMARK(bm_evaluate_colorable3)->Arg(4)->Arg(5);
BENCHMARK(bm_oracle_colorable)->Arg(8)->Arg(64);
BENCHMARK(bm_oracle_hamiltonian)->Arg(8)->Arg(10);
BENCHMARK(bm_reduce_allselected_to_hamiltonian)->Arg(8)->Arg(32);
BENCHMARK(bm_enumerate_graphs)->Arg(4)->Arg(5);

} // namespace

BENCHMARK_MAIN();
