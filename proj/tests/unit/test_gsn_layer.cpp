#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "geometry.hpp"
#include "gsn/gsn_layer.hpp"
#include "oracles.hpp"

using namespace gsn;
using namespace geometry;

namespace {

/// Edge-list assembly straight from the definition, one edge at a time.
Matrix naive_forces(const SignedGraph& g, const NodeStatics& s, const ForceParams& params,
                    const Matrix& x) {
  Matrix f(x.rows(), x.cols());
  const bool nn = kind_of(params) == ModelKind::spr_nn;
  auto gain = [&](NodeId i) {
    const auto node = node_feature(s, i);
    return nn ? sprnn_g(std::get<SprNnParams>(params), node)
              : spr_g(std::get<SprParams>(params), node);
  };
  for (const auto& e : g.edges()) {
    double d2 = 0;
    for (std::size_t c = 0; c < x.cols(); ++c) d2 += (x(e.v, c) - x(e.u, c)) * (x(e.v, c) - x(e.u, c));
    const double d = std::sqrt(d2);
    auto law = [&](NodeId i, NodeId j) {
      if (!nn) return spr_f(std::get<SprParams>(params), e.observed_sign, d);
      EdgeFeature z = edge_feature(s, i, j);
      z.dist = d;
      return sprnn_f(std::get<SprNnParams>(params), e.observed_sign, z);
    };
    const double fu = law(e.u, e.v);
    const double fv = law(e.v, e.u);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double dir = (x(e.v, c) - x(e.u, c)) / d;
      f(e.u, c) += gain(e.u) * fu * dir;
      f(e.v, c) -= gain(e.v) * fv * dir;
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("gsn_layer") {

TEST_CASE("two nodes on a neutral spring") {
  const SignedGraph g(2, {{0, 1, Sign::positive, Sign::neutral}});
  const auto s = compute_node_statics(g);
  Matrix x(2, 2);
  x(1, 0) = 3.0;  // d = 3, rest length 2 -> unit pull
  const Matrix f = gsn_apply(g, s, SprParams{}, x);
  CHECK(f(0, 0) == 1.0);
  CHECK(f(0, 1) == 0.0);
  CHECK(f(1, 0) == -1.0);
}

TEST_CASE("node-centric assembly matches edge-list assembly") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = fixture::random_graph({15, 40, 0.3, 0.3, seed});
    const auto s = compute_node_statics(g);
    const Matrix x = random_positions(15, 3, seed);
    for (const ForceParams& p : {ForceParams{random_spr(seed)}, init_params(ModelKind::spr_nn, seed)}) {
      CHECK(max_abs_diff(gsn_apply(g, s, p, x), naive_forces(g, s, p, x)) < 1e-12);
    }
  }
}

TEST_CASE("translation and rotation invariance, momentum conservation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = fixture::random_graph({20, 50, 0.3, 0.2, seed});
    const auto s = compute_node_statics(g);
    const std::size_t k = 4;
    const Matrix x = random_positions(20, k, seed + 100);
    const ForceParams nn = init_params(ModelKind::spr_nn, seed);
    const Matrix f = gsn_apply(g, s, nn, x);

    Matrix shifted = x;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t c = 0; c < k; ++c) shifted(i, c) += 0.7 * static_cast<double>(c) - 1.3;
    CHECK(max_abs_diff(gsn_apply(g, s, nn, shifted), f) <= 1e-9);

    const Matrix q = random_rotation(k, seed);
    CHECK(max_abs_diff(gsn_apply(g, s, nn, times(x, q)), times(f, q)) <= 1e-9);

    SprParams spr = random_spr(seed);
    spr.beta = 0.0;
    const Matrix fs = gsn_apply(g, s, spr, x);
    for (std::size_t c = 0; c < k; ++c) {
      double total = 0;
      for (std::size_t i = 0; i < 20; ++i) total += fs(i, c);
      CHECK(std::abs(total) <= 1e-9);
    }
  }
}

TEST_CASE("result is bitwise independent of the thread count") {
  const auto g = fixture::random_graph({1500, 6000, 0.2, 0.2, 4});
  const auto s = compute_node_statics(g);
  const Matrix x = random_positions(1500, 8, 5);
  const ForceParams p = init_params(ModelKind::spr_nn, 2);
  ForceFieldOptions one;
  ForceFieldOptions four;
  four.threads = 4;
  const Matrix a = gsn_apply(g, s, p, x, one);
  CHECK(gsn_apply(g, s, p, x, four) == a);

  Matrix adj = random_positions(1500, 8, 6);
  Matrix xg1(1500, 8), xg4(1500, 8);
  std::vector<double> tg1(208), tg4(208);
  ForceField(g, s, p, one).backward(x, adj, 0, xg1, tg1);
  ForceField(g, s, p, four).backward(x, adj, 0, xg4, tg4);
  CHECK(xg1 == xg4);
  CHECK(tg1 == tg4);
}

TEST_CASE("coincident endpoints use a keyed unit direction") {
  const SignedGraph g(2, {{0, 1, Sign::positive, Sign::neutral}});
  const auto s = compute_node_statics(g);
  const Matrix x(2, 5, 0.25);
  ForceFieldOptions opt;
  opt.tie_seed = 9;
  const Matrix f = gsn_apply(g, s, SprParams{}, x, opt, 3);
  double n0 = 0;
  for (std::size_t c = 0; c < 5; ++c) {
    CHECK(std::isfinite(f(0, c)));
    CHECK(f(0, c) == -f(1, c));
    n0 += f(0, c) * f(0, c);
  }
  // |f| = a_neu * |0 - l_neu| = 2
  CHECK(std::sqrt(n0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gsn_apply(g, s, SprParams{}, x, opt, 3) == f);
  CHECK(gsn_apply(g, s, SprParams{}, x, opt, 4) != f);
}

TEST_CASE("single precision path tracks double precision") {
  const auto g = fixture::random_graph({30, 80, 0.3, 0.2, 8});
  const auto s = compute_node_statics(g);
  const Matrix x = random_positions(30, 4, 9);
  const ForceField field(g, s, init_params(ModelKind::spr_nn, 3));
  const Matrix fd = field.apply(x);
  const MatrixF ff = field.apply(x.cast<float>());
  double worst = 0;
  for (std::size_t i = 0; i < fd.values().size(); ++i)
    worst = std::max(worst, std::abs(fd.values()[i] - static_cast<double>(ff.values()[i])));
  CHECK(worst < 1e-4);
}

TEST_CASE("vector-Jacobian product matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto g = fixture::random_graph({10, 20, 0.3, 0.3, seed});
    const auto s = compute_node_statics(g);
    const Matrix x = random_positions(10, 3, seed + 7);
    const Matrix adj = random_positions(10, 3, seed + 8, 1.0);
    for (const ForceParams& p0 : {ForceParams{random_spr(seed)}, init_params(ModelKind::spr_nn, seed)}) {
      const ForceField field(g, s, p0);
      Matrix xg(10, 3);
      std::vector<double> tg(param_count(p0), 0.0);
      field.backward(x, adj, 0, xg, tg);

      auto dot = [&](const Matrix& f) {
        double t = 0;
        for (std::size_t i = 0; i < f.values().size(); ++i) t += f.values()[i] * adj.values()[i];
        return t;
      };
      for (std::size_t idx = 0; idx < x.values().size(); ++idx) {
        const double num = oracle::central_difference(
            [&](double v) {
              Matrix xp = x;
              xp.values()[idx] = v;
              return dot(field.apply(xp));
            },
            x.values()[idx], 1e-6);
        CHECK(oracle::close(xg.values()[idx], num, 1e-5, 1e-7));
      }
      const auto flat = flatten(p0);
      for (std::size_t j = 0; j < flat.size(); ++j) {
        const double num = oracle::central_difference(
            [&](double v) {
              ForceParams p = p0;
              auto f2 = flat;
              f2[j] = v;
              unflatten(p, f2);
              return dot(ForceField(g, s, p).apply(x));
            },
            flat[j], 1e-6);
        CHECK(oracle::close(tg[j], num, 1e-5, 1e-7));
      }
    }
  }
}

TEST_CASE("shape mismatches are rejected") {
  const auto g = fixture::random_graph({10, 20, 0.3, 0.3, 1});
  const auto s = compute_node_statics(g);
  CHECK_THROWS(gsn_apply(g, s, SprParams{}, Matrix(9, 2)));
}

}
