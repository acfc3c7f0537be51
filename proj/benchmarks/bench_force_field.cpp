#include <benchmark/benchmark.h>

#include <algorithm>
#include <unordered_set>

#include "gsn/gsn_layer.hpp"
#include "gsn/rng.hpp"
#include "gsn/simulator.hpp"

namespace {

// Uniform random simple graph with 85% positive signs and 20% hidden.
gsn::SignedGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<gsn::Edge> edges;
  for (std::uint64_t draw = 0; edges.size() < m; ++draw) {
    auto a = static_cast<gsn::NodeId>(gsn::rng::uniform(seed, gsn::rng::tags::bench, draw, 0) * n);
    auto b = static_cast<gsn::NodeId>(gsn::rng::uniform(seed, gsn::rng::tags::bench, draw, 1) * n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert(std::uint64_t{a} * n + b).second) continue;
    const auto s = gsn::rng::uniform(seed, gsn::rng::tags::bench, draw, 2) < 0.85 ? gsn::Sign::positive
                                                                                  : gsn::Sign::negative;
    edges.push_back({a, b, s, s});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& l, const auto& r) { return std::pair(l.u, l.v) < std::pair(r.u, r.v); });
  return gsn::hide_signs(gsn::SignedGraph(n, std::move(edges)), {0.2, seed}).graph;
}

struct Setup {
  gsn::SignedGraph graph;
  gsn::NodeStatics statics;
  gsn::SimConfig sim;
  gsn::SimState state;

  Setup(std::size_t n, std::size_t m, std::size_t k) : graph(random_graph(n, m, 7)), statics(gsn::compute_node_statics(graph)) {
    sim.k = k;
    sim.n_steps = 10;
    state = gsn::init_state(n, sim);
  }
};

void BM_GsnApply(benchmark::State& st) {
  const Setup s(st.range(0), st.range(1), st.range(2));
  const gsn::ForceField field(s.graph, s.statics, gsn::init_params(gsn::ModelKind::spr_nn, 1));
  gsn::Matrix out(s.state.x.rows(), s.state.x.cols());
  for (auto _ : st) {
    field.apply(s.state.x, out, 0);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["Mk"] = double(st.range(1) * st.range(2));
}

void BM_Simulate10(benchmark::State& st) {
  const Setup s(st.range(0), st.range(1), st.range(2));
  const gsn::ForceField field(s.graph, s.statics, gsn::init_params(gsn::ModelKind::spr_nn, 1));
  for (auto _ : st) {
    auto final = gsn::simulate(s.state, field, s.sim);
    benchmark::DoNotOptimize(final.x.data());
  }
}

void grid(benchmark::internal::Benchmark* b) {
  for (long m : {25000, 50000}) {
    for (long k : {32, 64}) b->Args({5000, m, k});
  }
}

}  // namespace

BENCHMARK(BM_GsnApply)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulate10)->Apply(grid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
