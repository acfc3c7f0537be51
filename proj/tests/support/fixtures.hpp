#pragma once

// Small random instances for tests, drawn with std::mt19937_64 so they do not
// depend on the library's own generator.

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gsn/signed_graph.hpp"

namespace fixture {

struct GraphSpec {
  std::size_t n = 12;
  std::size_t m = 24;
  double p_negative = 0.3;
  double p_hidden = 0.2;
  std::uint64_t seed = 1;
};

/// Random simple undirected graph with at least one visible edge of each
/// sign (so every loss domain is well defined).
inline gsn::SignedGraph random_graph(const GraphSpec& spec) {
  std::mt19937_64 gen(spec.seed);
  std::uniform_int_distribution<gsn::NodeId> node(0, static_cast<gsn::NodeId>(spec.n - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t max_m = spec.n * (spec.n - 1) / 2;
  const std::size_t m = spec.m < max_m ? spec.m : max_m;

  std::set<std::pair<gsn::NodeId, gsn::NodeId>> pairs;
  while (pairs.size() < m) {
    gsn::NodeId a = node(gen);
    gsn::NodeId b = node(gen);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    pairs.insert({a, b});
  }
  std::vector<gsn::Edge> edges;
  for (auto [u, v] : pairs) {
    const auto sign = unit(gen) < spec.p_negative ? gsn::Sign::negative : gsn::Sign::positive;
    const auto observed = unit(gen) < spec.p_hidden ? gsn::Sign::neutral : sign;
    edges.push_back({u, v, sign, observed});
  }
  // Guarantee both visible classes.
  edges[0].true_sign = edges[0].observed_sign = gsn::Sign::positive;
  edges[1].true_sign = edges[1].observed_sign = gsn::Sign::negative;
  return gsn::SignedGraph(spec.n, std::move(edges));
}

}  // namespace fixture
