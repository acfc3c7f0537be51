#include "bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "gsn/gsn_layer.hpp"
#include "gsn/rng.hpp"
#include "gsn/simulator.hpp"

namespace gsn::cli {

SignedGraph synthetic_graph(std::size_t n_nodes, std::size_t n_edges, std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("synthetic graph needs at least two nodes");
  const std::size_t max_edges = n_nodes * (n_nodes - 1) / 2;
  if (n_edges > max_edges) throw std::invalid_argument("too many edges for a simple graph");

  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  edges.reserve(n_edges);
  const double n = static_cast<double>(n_nodes);
  for (std::uint64_t draw = 0; edges.size() < n_edges; ++draw) {
    auto a = static_cast<NodeId>(rng::uniform(seed, rng::tags::bench, draw, 0) * n);
    auto b = static_cast<NodeId>(rng::uniform(seed, rng::tags::bench, draw, 1) * n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert(static_cast<std::uint64_t>(a) * n_nodes + b).second) continue;
    const Sign s = rng::uniform(seed, rng::tags::bench, draw, 2) < 0.85 ? Sign::positive : Sign::negative;
    edges.push_back({a, b, s, s});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& l, const Edge& r) { return std::pair(l.u, l.v) < std::pair(r.u, r.v); });
  return SignedGraph(n_nodes, std::move(edges));
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Solves the 3x3 normal equations by Cramer's rule.
std::array<double, 3> solve3(const std::array<std::array<double, 3>, 3>& a, const std::array<double, 3>& b) {
  auto det = [](const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det(a);
  std::array<double, 3> x{};
  if (std::abs(d) < 1e-300) return {NAN, NAN, NAN};
  for (int c = 0; c < 3; ++c) {
    auto m = a;
    for (int r = 0; r < 3; ++r) m[r][c] = b[r];
    x[c] = det(m) / d;
  }
  return x;
}

}  // namespace

Timing time_runs(const std::function<void()>& fn, std::size_t runs) {
  if (runs == 0) throw std::invalid_argument("need at least one timed run");
  fn();
  std::vector<double> ms;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return {quantile(ms, 0.5), quantile(ms, 0.75) - quantile(ms, 0.25)};
}

std::vector<BenchRow> run_bench_grid(const RunConfig& cfg) {
  std::vector<BenchRow> rows;
  const ForceParams params = init_params(ModelKind::spr_nn, rng::derive(cfg.seed, rng::tags::params, 0));
  for (std::size_t n : cfg.bench_nodes) {
    for (std::size_t m : cfg.bench_edges) {
      const auto base = synthetic_graph(n, m, rng::derive(cfg.seed, rng::tags::bench, n * 1000003 + m));
      const auto graph = hide_signs(base, {0.2, cfg.seed}).graph;
      const auto statics = compute_node_statics(graph);
      ForceFieldOptions opt;
      opt.threads = cfg.threads;
      const ForceField field(graph, statics, params, opt);
      for (std::size_t k : cfg.bench_k) {
        SimConfig sim;
        sim.k = k;
        sim.n_steps = cfg.bench_sim_steps;
        sim.seed = cfg.seed;
        const SimState s0 = init_state(n, sim);
        Matrix force(n, k);
        rows.push_back({n, m, k, "gsn_apply",
                        time_runs([&] { field.apply(s0.x, force, 0); }, cfg.bench_runs)});
        rows.push_back({n, m, k, "simulate",
                        time_runs([&] { (void)simulate(s0, field, sim); }, cfg.bench_runs)});
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n_nodes,n_edges,k,op,median_ms,iqr_ms\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%s,%.6f,%.6f\n", r.n_nodes, r.n_edges, r.k,
                  r.op.c_str(), r.timing.median_ms, r.timing.iqr_ms);
    out += buf;
  }
  return out;
}

json bench_summary(const std::vector<BenchRow>& rows) {
  json summary;
  std::map<std::string, std::vector<const BenchRow*>> by_op;
  for (const auto& r : rows) by_op[r.op].push_back(&r);

  for (const auto& [op, list] : by_op) {
    json entry;
    // Fit on features (M k, N k, 1).
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> aty{};
    for (const auto* r : list) {
      const std::array<double, 3> f{double(r->n_edges * r->k), double(r->n_nodes * r->k), 1.0};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) ata[i][j] += f[i] * f[j];
        aty[i] += f[i] * r->timing.median_ms;
      }
    }
    const auto coef = solve3(ata, aty);
    if (std::isfinite(coef[0])) {
      entry["fit"] = {{"ms_per_Mk", coef[0]}, {"ms_per_Nk", coef[1]}, {"ms_const", coef[2]}};
    } else {
      entry["fit"] = nullptr;  // grid too small to separate the terms
    }

    json m_ratios = json::array();
    json k_ratios = json::array();
    for (const auto* a : list) {
      for (const auto* b : list) {
        if (a->n_nodes != b->n_nodes) continue;
        if (a->k == b->k && b->n_edges == 2 * a->n_edges) {
          m_ratios.push_back({{"n_nodes", a->n_nodes}, {"k", a->k}, {"n_edges", a->n_edges},
                              {"ratio", b->timing.median_ms / a->timing.median_ms}});
        }
        if (a->n_edges == b->n_edges && b->k == 2 * a->k) {
          k_ratios.push_back({{"n_nodes", a->n_nodes}, {"n_edges", a->n_edges}, {"k", a->k},
                              {"ratio", b->timing.median_ms / a->timing.median_ms}});
        }
      }
    }
    entry["edge_doubling"] = m_ratios;
    entry["dim_doubling"] = k_ratios;
    summary[op] = entry;
  }
  return summary;
}

}  // namespace gsn::cli
