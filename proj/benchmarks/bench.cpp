#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ccn/balanced.hpp"
#include "ccn/dynamics.hpp"
#include "ccn/groupoid.hpp"
#include "ccn/sim.hpp"

namespace {

// Ring of n identical cells, each fed by its predecessor. One input-tree
// class, automorphism group Z_n: enough structure to exercise every hot path
// without drowning the timings in setup.
ccn::GraphPtr ring(int n) {
  ccn::RawColorGraph colors;
  colors.node_colors = {"cell"};
  colors.edge_colors = {{"link", "cell", "cell"}};
  std::vector<ccn::RawNode> nodes;
  std::vector<ccn::RawEdge> edges;
  for (int i = 0; i < n; ++i) {
    std::string id = "n" + std::to_string(i);
    nodes.push_back({id, "cell"});
    edges.push_back({"e" + std::to_string(i), "n" + std::to_string((i + n - 1) % n), id, "link"});
  }
  return ccn::validate_colored_graph(ccn::validate_color_graph(colors), nodes, edges);
}

void bm_skeleton(benchmark::State& state) {
  auto g = ring(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccn::skeleton(g));
  }
}
BENCHMARK(bm_skeleton)->Arg(16)->Arg(64)->Arg(256);

void bm_coarsest_balanced(benchmark::State& state) {
  auto g = ring(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccn::coarsest_balanced(g));
  }
}
BENCHMARK(bm_coarsest_balanced)->Arg(16)->Arg(64)->Arg(256);

void bm_automorphisms(benchmark::State& state) {
  auto g = ring(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccn::graph_automorphisms(g, 16));
  }
}
BENCHMARK(bm_automorphisms)->Arg(6)->Arg(10);

void bm_parse(benchmark::State& state) {
  const std::string text = "tanh(u0_0) - 0.5*u1_0^3 + sin(u2_0)/(1 + u0_0^2)";
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccn::parse(text));
  }
}
BENCHMARK(bm_parse);

void bm_rk4(benchmark::State& state) {
  auto g = ring(8);
  ccn::PhaseDims dims = ccn::resolve_dims(g->colors, {{"cell", 1}});
  ccn::ModuleSpec spec;
  spec.outputs = {"tanh(u0_0)"};
  ccn::VirtualField w = ccn::make_virtual_field(g, dims, {{"c0", spec}});
  ccn::AssembledField f = ccn::realize(w);
  std::vector<double> x0(f.dim(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccn::integrate_rk4(f, x0, 1e-3, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_rk4)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
