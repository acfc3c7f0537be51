#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "gsn/force_model.hpp"

using namespace gsn;

TEST_SUITE("force_model") {

TEST_CASE("SPR springs per observed sign") {
  const SprParams p;  // l = (1, 2, 3), unit stiffness
  CHECK(spr_f(p, Sign::neutral, 2.0) == 0.0);
  CHECK(spr_f(p, Sign::neutral, 3.5) == 1.5);
  CHECK(spr_f(p, Sign::neutral, 0.5) == -1.5);
  // Positive springs only pull, negative springs only push.
  CHECK(spr_f(p, Sign::positive, 0.5) == 0.0);
  CHECK(spr_f(p, Sign::positive, 1.75) == 0.75);
  CHECK(spr_f(p, Sign::negative, 4.0) == 0.0);
  CHECK(spr_f(p, Sign::negative, 2.5) == -0.5);

  SprParams q = p;
  q.a_pos = 2.0;
  q.a_neg = 4.0;
  CHECK(spr_f(q, Sign::positive, 3.0) == 4.0);
  CHECK(spr_f(q, Sign::negative, 0.0) == -12.0);
}

TEST_CASE("SPR gain scales with clipped degree") {
  SprParams p;
  p.beta = 0.5;
  CHECK(spr_g(p, {4.0, 8.0, 0, 0, false}) == 1.25);
  CHECK(spr_g(p, {20.0, 8.0, 0, 0, false}) == 1.5);
  CHECK(spr_g(SprParams{}, {20.0, 8.0, 0, 0, false}) == 1.0);
  CHECK_THROWS(spr_g(p, {1.0, 0.0, 0, 0, false}));
}

TEST_CASE("MLP evaluates w1 . relu(w0 x + b0) + b1") {
  MlpParams net = MlpParams::zeros(2, 2);
  net.w0 = {1.0, -1.0,   // hidden 0: x0 - x1
            2.0, 0.5};   // hidden 1: 2 x0 + 0.5 x1
  net.b0 = {0.0, -1.0};
  net.w1 = {3.0, -2.0};
  net.b1 = 0.25;
  // x = (1, 3): h0 = relu(-2) = 0, h1 = relu(2 + 1.5 - 1) = 2.5
  CHECK(mlp_eval(net, std::vector<double>{1.0, 3.0}) == doctest::Approx(0.25 - 5.0).epsilon(1e-15));
  // x = (2, 0): h0 = 2, h1 = 3
  CHECK(mlp_eval(net, std::vector<double>{2.0, 0.0}) == doctest::Approx(6.0 - 6.0 + 0.25));
  CHECK_THROWS(mlp_eval(net, std::vector<double>{1.0}));
}

TEST_CASE("SPR-NN dispatches on the observed sign") {
  SprNnParams p;
  p.f_neutral.b1 = 1.0;
  p.f_positive.b1 = 2.0;
  p.f_negative.b1 = 3.0;
  const EdgeFeature z{};
  CHECK(sprnn_f(p, Sign::neutral, z) == 1.0);
  CHECK(sprnn_f(p, Sign::positive, z) == 2.0);
  CHECK(sprnn_f(p, Sign::negative, z) == 3.0);
}

TEST_CASE("feature vectors") {
  NodeStatics s;
  s.deg = {2, 10};
  s.neg_frac = {0.5, 0.1};
  s.pos_frac = {0.5, 0.2};
  s.p80 = 4.0;
  const auto a = node_feature(s, 0);
  CHECK(a.deg_feature() == 0.5);
  CHECK(node_feature(s, 1).deg_feature() == 1.0);
  CHECK(node_feature(s, 1, {true}).deg_feature() == 10.0);
  const auto z = edge_feature(s, 0, 1).as_array();
  CHECK(z == std::array<double, 7>{0.0, 0.5, 1.0, 0.5, 0.1, 0.5, 0.2});
}

TEST_CASE("parameter counts and flat layout") {
  const auto spr = init_params(ModelKind::spr, 1);
  CHECK(param_count(spr) == 7);
  CHECK(flatten(spr) == std::vector<double>{1, 2, 3, 1, 1, 1, 0});
  CHECK(param_names(spr).size() == 7);

  const auto nn = init_params(ModelKind::spr_nn, 1);
  CHECK(param_count(nn) == 208);
  const auto flat = flatten(nn);
  REQUIRE(flat.size() == 208);
  const auto names = param_names(nn);
  CHECK(names.size() == 208);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 208);

  // Blocks: g_net [0, 16), f_neutral [16, 80), f_positive [80, 144), f_negative [144, 208).
  const auto& p = std::get<SprNnParams>(nn);
  CHECK(flat[0] == p.g_net.w0[0]);
  CHECK(flat[9] == p.g_net.w1[0]);
  CHECK(flat[16] == p.f_neutral.w0[0]);
  CHECK(flat[80] == p.f_positive.w0[0]);
  CHECK(flat[144 + 49] == p.f_negative.w1[0]);
}

TEST_CASE("flatten and unflatten are inverse") {
  auto nn = init_params(ModelKind::spr_nn, 7);
  auto flat = flatten(nn);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += 0.001 * static_cast<double>(i);
  unflatten(nn, flat);
  CHECK(flatten(nn) == flat);
  CHECK_THROWS(unflatten(nn, std::vector<double>(5)));
}

TEST_CASE("Glorot initialization is bounded, keyed and has zero biases") {
  const auto a = std::get<SprNnParams>(init_params(ModelKind::spr_nn, 3));
  const auto b = std::get<SprNnParams>(init_params(ModelKind::spr_nn, 3));
  const auto c = std::get<SprNnParams>(init_params(ModelKind::spr_nn, 4));
  CHECK(a.f_positive.w0 == b.f_positive.w0);
  CHECK(a.f_positive.w0 != c.f_positive.w0);
  CHECK(a.f_positive.w0 != a.f_negative.w0);
  const double s0 = std::sqrt(6.0 / 14.0);
  for (double w : a.f_neutral.w0) CHECK(std::abs(w) < s0);
  for (double w : a.g_net.w1) CHECK(std::abs(w) < std::sqrt(6.0 / 4.0));
  CHECK(std::all_of(a.f_neutral.b0.begin(), a.f_neutral.b0.end(), [](double v) { return v == 0; }));
  CHECK(a.f_neutral.b1 == 0.0);
}

TEST_CASE("model names") {
  CHECK(parse_model_kind("spr") == ModelKind::spr);
  CHECK(parse_model_kind("spr-nn") == ModelKind::spr_nn);
  CHECK(to_string(ModelKind::spr_nn) == "spr-nn");
  CHECK_THROWS(parse_model_kind("gcn"));
}

}
