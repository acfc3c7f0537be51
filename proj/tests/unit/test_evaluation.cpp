#include <cmath>
#include <random>

#include "doctest.h"
#include "gsn/evaluation.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace gsn;

namespace {

std::vector<Sign> signs(const std::vector<int>& v) {
  std::vector<Sign> out;
  for (int x : v) out.push_back(sign_from_int(x));
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("prediction threshold and logistic map") {
  const SignedGraph g(6, {{0, 1, Sign::positive, Sign::neutral},
                          {2, 3, Sign::positive, Sign::neutral},
                          {4, 5, Sign::negative, Sign::neutral}});
  Matrix x(6, 1);
  x(1, 0) = 2.5;   // d = mu
  x(3, 0) = 0.0;   // d = 0
  x(5, 0) = 10.0;  // d = 10
  const std::vector<std::size_t> hidden{0, 1, 2};
  const auto p = predict(g, hidden, x, 2.5);
  CHECK(p[0].prob == 0.5);
  CHECK(p[0].pred_sign == Sign::positive);
  CHECK(p[1].pred_sign == Sign::positive);
  CHECK(p[2].prob == doctest::Approx(5.5e-4).epsilon(0.01));
  CHECK(p[2].pred_sign == Sign::negative);
  CHECK_THROWS(predict(g, std::vector<std::size_t>{}, x, 2.5));
}

TEST_CASE("F1 variants by hand") {
  const auto f = f1_scores(signs({1, 1, -1}), signs({1, -1, -1}));
  CHECK(f.binary == doctest::Approx(2.0 / 3));
  CHECK(f.macro == doctest::Approx(2.0 / 3));
  CHECK(f.micro == doctest::Approx(2.0 / 3));
  CHECK(f.weighted == doctest::Approx(2.0 / 3));

  const auto perfect = f1_scores(signs({1, -1, 1}), signs({1, -1, 1}));
  CHECK(perfect.micro == 1.0);
  CHECK(perfect.macro == 1.0);
  CHECK(perfect.weighted == 1.0);
  CHECK(perfect.binary == 1.0);

  std::vector<int> truth(100, 1);
  for (int i = 0; i < 10; ++i) truth[i] = -1;
  const auto trivial = f1_scores(signs(truth), signs(std::vector<int>(100, 1)));
  CHECK(trivial.binary == doctest::Approx(0.947).epsilon(1e-3));
  CHECK(trivial.macro == doctest::Approx(0.474).epsilon(1e-3));
  CHECK(trivial.micro == doctest::Approx(0.9));

  CHECK_THROWS(f1_scores(std::vector<Sign>{}, std::vector<Sign>{}));
}

TEST_CASE("absent class contributes zero") {
  const auto f = f1_scores(signs({1, 1}), signs({1, -1}));
  CHECK(f.binary == doctest::Approx(2.0 / 3));
  CHECK(f.macro == doctest::Approx(1.0 / 3));
  CHECK(f.weighted == doctest::Approx(2.0 / 3));
}

TEST_CASE("AUC by hand") {
  CHECK(auc(std::vector<double>{0.9, 0.4, 0.6, 0.1}, signs({1, 1, -1, -1})) == 0.75);
  CHECK(auc(std::vector<double>{0.9, 0.8, 0.2}, signs({1, 1, -1})) == 1.0);
  CHECK(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, signs({1, -1, 1, -1})) == 0.5);
  CHECK_THROWS(auc(std::vector<double>{0.1, 0.2}, signs({1, 1})));
}

TEST_CASE("metrics agree with brute force on random cases") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 40;
    std::vector<int> truth(n), pred(n);
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = u(gen) < 0.7 ? 1 : -1;
      score[i] = std::round(u(gen) * 10) / 10;  // coarse grid forces ties
      pred[i] = score[i] >= 0.5 ? 1 : -1;
    }
    truth[0] = 1;
    truth[1] = -1;
    const auto f = f1_scores(signs(truth), signs(pred));
    const auto b = oracle::brute_f1(truth, pred);
    CHECK(std::abs(f.micro - b.micro) <= 1e-12);
    CHECK(std::abs(f.macro - b.macro) <= 1e-12);
    CHECK(std::abs(f.weighted - b.weighted) <= 1e-12);
    CHECK(std::abs(f.binary - b.binary) <= 1e-12);
    CHECK(std::abs(auc(score, signs(truth)) - oracle::pairwise_auc(score, truth)) <= 1e-12);
  }
}

TEST_CASE("AUC-P is invariant under monotone maps") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(60), t(60);
  std::vector<Sign> truth(60);
  for (std::size_t i = 0; i < 60; ++i) {
    s[i] = u(gen);
    t[i] = std::exp(3.0 * s[i]) - 7.0;
    truth[i] = u(gen) < 0.6 ? Sign::positive : Sign::negative;
  }
  CHECK(auc(s, truth) == auc(t, truth));
}

TEST_CASE("AUC-L is the mean of TPR and TNR") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Sign> truth, pred;
    std::vector<double> score;
    for (int i = 0; i < 50; ++i) {
      truth.push_back(u(gen) < 0.5 ? Sign::positive : Sign::negative);
      pred.push_back(u(gen) < 0.5 ? Sign::positive : Sign::negative);
      score.push_back(pred.back() == Sign::positive ? 1.0 : 0.0);
    }
    truth[0] = Sign::positive;
    truth[1] = Sign::negative;
    const auto c = confusion(truth, pred);
    const double tpr = double(c.tp) / double(c.tp + c.fn);
    const double tnr = double(c.tn) / double(c.tn + c.fp);
    CHECK(auc(score, truth) == doctest::Approx((tpr + tnr) / 2).epsilon(1e-14));
    CHECK(f1_scores(truth, pred).micro == double(c.tp + c.tn) / 50.0);
  }
}

TEST_CASE("evaluate composes the metrics") {
  const PredictionSet two{{0, 1, Sign::positive, 0.8, Sign::positive},
                          {2, 3, Sign::negative, 0.2, Sign::negative}};
  const auto r = evaluate(two);
  CHECK(r.f1_micro == 1.0);
  CHECK(r.auc_l == 1.0);
  CHECK(r.counts.tp == 1);
  CHECK(r.counts.tn == 1);
  CHECK(r.n_hidden == 2);
  CHECK(report_to_json(evaluate(two)) == report_to_json(r));
}

TEST_CASE("report JSON and text formats") {
  MetricsReport r;
  r.f1_micro = 0.9;
  r.auc_l = 0.75;
  r.counts = {5, 1, 3, 2};
  r.n_hidden = 11;
  r.seed = 4;
  r.config_hash = "abc";
  const auto j = nlohmann::json::parse(report_to_json(r));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> expected{"auc_l", "auc_p", "config_hash", "f1_binary", "f1_macro",
                                    "f1_micro", "f1_weighted", "fn", "fp", "n_hidden",
                                    "seed", "tn", "tp"};
  CHECK(keys == expected);
  const auto back = report_from_json(report_to_json(r));
  CHECK(back.f1_micro == 0.9);
  CHECK(back.counts.fn == 2);
  CHECK(back.config_hash == "abc");

  const auto text = report_to_text(r);
  for (const char* col : {"F1-MI", "F1-MA", "F1-WT", "F1-BI", "AUC-P", "AUC-L"}) {
    CHECK(text.find(col) != std::string::npos);
  }
  CHECK(text.find("90.00") != std::string::npos);
}

TEST_CASE("aggregation uses the sample standard deviation") {
  MetricsReport a, b, c;
  a.f1_macro = 0.7;
  b.f1_macro = 0.8;
  c.f1_macro = 0.9;
  a.auc_l = b.auc_l = c.auc_l = 0.6;
  const std::vector<MetricsReport> runs{a, b, c};
  const auto agg = aggregate(runs);
  CHECK(agg.n_runs == 3);
  CHECK(agg.f1_macro.mean == doctest::Approx(0.8));
  CHECK(agg.f1_macro.std == doctest::Approx(0.1));
  CHECK(agg.auc_l.std == 0.0);
  CHECK(aggregate_to_text(agg).find("AUC-L") != std::string::npos);
  CHECK(nlohmann::json::parse(aggregate_to_json(agg))["f1_macro"]["mean"].get<double>() ==
        doctest::Approx(0.8));
}

TEST_CASE("calibration recovers a decreasing logistic map") {
  std::vector<Edge> edges;
  Matrix x(200, 1);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NodeId e = 0; e < 100; ++e) {
    const double d = 5.0 * u(gen);
    const bool pos = u(gen) < 1.0 / (1.0 + std::exp(2.0 * (d - 2.0)));
    const Sign s = pos ? Sign::positive : Sign::negative;
    edges.push_back({2 * e, 2 * e + 1, s, s});
    x(2 * e + 1, 0) = d;
  }
  const auto cal = fit_calibration(SignedGraph(200, edges), x);
  CHECK(cal.slope < 0.0);
  CHECK(-cal.intercept / cal.slope == doctest::Approx(2.0).epsilon(0.3));
  CHECK(Calibration::fixed(2.5).prob(2.5) == 0.5);
}

}
