#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "gsn/signed_graph.hpp"

namespace gsn::cli {

/// Uniform random simple graph: M distinct pairs drawn with purpose tag
/// "bench", each positive with probability 0.85.
SignedGraph synthetic_graph(std::size_t n_nodes, std::size_t n_edges, std::uint64_t seed);

struct Timing {
  double median_ms = 0.0;
  double iqr_ms = 0.0;
};

/// Runs `fn` once to warm up, then `runs` timed repetitions.
Timing time_runs(const std::function<void()>& fn, std::size_t runs);

struct BenchRow {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t k = 0;
  std::string op;  // "gsn_apply" or "simulate"
  Timing timing;
};

std::vector<BenchRow> run_bench_grid(const RunConfig& cfg);

/// CSV with header n_nodes,n_edges,k,op,median_ms,iqr_ms.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Least-squares fit median_ms ~ a*M*k + b*N*k + c per op, plus the time
/// ratios for every doubling of M (fixed N, k) and of k (fixed N, M).
json bench_summary(const std::vector<BenchRow>& rows);

}  // namespace gsn::cli
