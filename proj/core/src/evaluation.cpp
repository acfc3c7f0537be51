#include "gsn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "gsn/gsn_layer.hpp"
#include "gsn/loss.hpp"

namespace gsn {

namespace {

using json = nlohmann::ordered_json;

struct ClassCounts {
  double tp = 0;
  double fp = 0;
  double fn = 0;
  double support = 0;
};

double f1_of(const ClassCounts& c) {
  const double p_den = c.tp + c.fp;
  const double r_den = c.tp + c.fn;
  if (p_den == 0 || r_den == 0) return 0.0;
  const double precision = c.tp / p_den;
  const double recall = c.tp / r_den;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

void check_label(Sign s) {
  if (s == Sign::neutral) throw std::invalid_argument("metric labels must be +1 or -1");
}

double label_score(Sign s) { return s == Sign::positive ? 1.0 : 0.0; }

}  // namespace

double Calibration::prob(double dist) const {
  return 1.0 / (1.0 + std::exp(-(intercept + slope * dist)));
}

Calibration fit_calibration(const SignedGraph& graph, const Matrix& x) {
  std::vector<double> dist;
  std::vector<double> y;
  for (const auto& e : graph.edges()) {
    if (e.observed_sign == Sign::neutral) continue;
    dist.push_back(pair_distance(x.row(e.u), x.row(e.v)));
    y.push_back(e.observed_sign == Sign::positive ? 1.0 : 0.0);
  }
  if (dist.empty()) throw std::invalid_argument("calibration needs visible edges");

  // A small ridge on the slope keeps the fit finite on separable data.
  constexpr double kRidge = 1e-6;
  double a = 0.0;
  double b = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    double ga = 0, gb = 0, haa = 0, hab = 0, hbb = kRidge;
    gb -= kRidge * b;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const double p = 1.0 / (1.0 + std::exp(-(a + b * dist[i])));
      const double r = y[i] - p;
      const double w = p * (1.0 - p);
      ga += r;
      gb += r * dist[i];
      haa += w;
      hab += w * dist[i];
      hbb += w * dist[i] * dist[i];
    }
    const double det = haa * hbb - hab * hab;
    if (!(det > 0.0)) break;
    const double da = (hbb * ga - hab * gb) / det;
    const double db = (haa * gb - hab * ga) / det;
    a += da;
    b += db;
    if (std::abs(da) + std::abs(db) < 1e-12) break;
  }
  return {a, b};
}

namespace {

template <class ProbFn>
PredictionSet predict_with(const SignedGraph& graph, std::span<const std::size_t> hidden,
                           const Matrix& x, ProbFn prob_of) {
  if (hidden.empty()) throw std::invalid_argument("hidden edge set is empty");
  if (x.rows() != graph.n_nodes()) throw std::invalid_argument("positions do not match graph");
  PredictionSet out;
  out.reserve(hidden.size());
  for (std::size_t idx : hidden) {
    if (idx >= graph.n_edges()) throw std::out_of_range("hidden edge index out of range");
    const Edge& e = graph.edge(idx);
    const double p = prob_of(pair_distance(x.row(e.u), x.row(e.v)));
    out.push_back({e.u, e.v, e.true_sign, p, p >= 0.5 ? Sign::positive : Sign::negative});
  }
  return out;
}

}  // namespace

PredictionSet predict(const SignedGraph& graph, std::span<const std::size_t> hidden,
                      const Matrix& x, const Calibration& calibration) {
  return predict_with(graph, hidden, x, [&](double d) { return calibration.prob(d); });
}

PredictionSet predict(const SignedGraph& graph, std::span<const std::size_t> hidden,
                      const Matrix& x, double mu) {
  // Same logistic map as the training loss.
  return predict_with(graph, hidden, x, [mu](double d) { return predict_prob(d, mu); });
}

Confusion confusion(std::span<const Sign> truths, std::span<const Sign> preds) {
  if (truths.size() != preds.size()) throw std::invalid_argument("label vectors differ in length");
  Confusion c;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    check_label(truths[i]);
    check_label(preds[i]);
    const bool t = truths[i] == Sign::positive;
    const bool p = preds[i] == Sign::positive;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (!t && !p) ++c.tn;
    else ++c.fn;
  }
  return c;
}

F1Scores f1_scores(std::span<const Sign> truths, std::span<const Sign> preds) {
  if (truths.empty()) throw std::invalid_argument("f1_scores needs at least one label");
  const Confusion c = confusion(truths, preds);
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);

  const ClassCounts pos{tp, fp, fn, tp + fn};
  const ClassCounts neg{tn, fn, fp, tn + fp};
  const double f_pos = f1_of(pos);
  const double f_neg = f1_of(neg);
  const double total = tp + fp + tn + fn;

  F1Scores s;
  s.binary = f_pos;
  s.macro = 0.5 * (f_pos + f_neg);
  s.weighted = (f_pos * pos.support + f_neg * neg.support) / total;
  // Pooled over both classes every error is one false positive and one
  // false negative, so micro precision = micro recall = accuracy.
  s.micro = (tp + tn) / total;
  return s;
}

double auc(std::span<const double> scores, std::span<const Sign> truths) {
  if (scores.size() != truths.size()) throw std::invalid_argument("scores and labels differ");
  std::size_t n_pos = 0;
  for (Sign s : truths) {
    check_label(s);
    n_pos += s == Sign::positive;
  }
  const std::size_t n_neg = truths.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1 .. j share their midrank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t r = i; r < j; ++r) {
      if (truths[order[r]] == Sign::positive) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricsReport evaluate(const PredictionSet& predictions) {
  if (predictions.empty()) throw std::invalid_argument("no predictions to evaluate");
  std::vector<Sign> truths;
  std::vector<Sign> preds;
  std::vector<double> probs;
  std::vector<double> labels;
  for (const auto& p : predictions) {
    truths.push_back(p.true_sign);
    preds.push_back(p.pred_sign);
    probs.push_back(p.prob);
    labels.push_back(label_score(p.pred_sign));
  }
  const F1Scores f1 = f1_scores(truths, preds);
  MetricsReport r;
  r.f1_micro = f1.micro;
  r.f1_macro = f1.macro;
  r.f1_weighted = f1.weighted;
  r.f1_binary = f1.binary;
  r.auc_p = auc(probs, truths);
  r.auc_l = auc(labels, truths);
  r.counts = confusion(truths, preds);
  r.n_hidden = predictions.size();
  return r;
}

MetricsReport evaluate(const SignedGraph& graph, std::span<const std::size_t> hidden,
                       const Matrix& x, double mu) {
  return evaluate(predict(graph, hidden, x, mu));
}

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["f1_micro"] = r.f1_micro;
  j["f1_macro"] = r.f1_macro;
  j["f1_weighted"] = r.f1_weighted;
  j["f1_binary"] = r.f1_binary;
  j["auc_p"] = r.auc_p;
  j["auc_l"] = r.auc_l;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["tn"] = r.counts.tn;
  j["fn"] = r.counts.fn;
  j["n_hidden"] = r.n_hidden;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  MetricsReport r;
  r.f1_micro = j.at("f1_micro").get<double>();
  r.f1_macro = j.at("f1_macro").get<double>();
  r.f1_weighted = j.at("f1_weighted").get<double>();
  r.f1_binary = j.at("f1_binary").get<double>();
  r.auc_p = j.at("auc_p").get<double>();
  r.auc_l = j.at("auc_l").get<double>();
  r.counts.tp = j.at("tp").get<std::size_t>();
  r.counts.fp = j.at("fp").get<std::size_t>();
  r.counts.tn = j.at("tn").get<std::size_t>();
  r.counts.fn = j.at("fn").get<std::size_t>();
  r.n_hidden = j.at("n_hidden").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config_hash = j.at("config_hash").get<std::string>();
  return r;
}

namespace {

constexpr const char* kColumns[] = {"F1-MI", "F1-MA", "F1-WT", "F1-BI", "AUC-P", "AUC-L"};

std::string header_row(int width) {
  std::string out;
  char buf[32];
  for (const char* c : kColumns) {
    std::snprintf(buf, sizeof buf, "%*s", width, c);
    out += buf;
  }
  return out + "\n";
}

MetricSummary summarize(std::span<const MetricsReport> reports, double MetricsReport::*field) {
  MetricSummary s;
  const double n = static_cast<double>(reports.size());
  for (const auto& r : reports) s.mean += r.*field;
  s.mean /= n;
  if (reports.size() > 1) {
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.*field - s.mean) * (r.*field - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace

std::string report_to_text(const MetricsReport& r) {
  std::string out = header_row(8);
  char buf[32];
  for (double v : {r.f1_micro, r.f1_macro, r.f1_weighted, r.f1_binary, r.auc_p, r.auc_l}) {
    std::snprintf(buf, sizeof buf, "%8.2f", 100.0 * v);
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "tp=%zu ", r.counts.tp);
  out += buf;
  std::snprintf(buf, sizeof buf, "fp=%zu ", r.counts.fp);
  out += buf;
  std::snprintf(buf, sizeof buf, "tn=%zu ", r.counts.tn);
  out += buf;
  std::snprintf(buf, sizeof buf, "fn=%zu ", r.counts.fn);
  out += buf;
  std::snprintf(buf, sizeof buf, "n_hidden=%zu\n", r.n_hidden);
  out += buf;
  return out;
}

AggregateReport aggregate(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw std::invalid_argument("nothing to aggregate");
  AggregateReport a;
  a.n_runs = reports.size();
  a.f1_micro = summarize(reports, &MetricsReport::f1_micro);
  a.f1_macro = summarize(reports, &MetricsReport::f1_macro);
  a.f1_weighted = summarize(reports, &MetricsReport::f1_weighted);
  a.f1_binary = summarize(reports, &MetricsReport::f1_binary);
  a.auc_p = summarize(reports, &MetricsReport::auc_p);
  a.auc_l = summarize(reports, &MetricsReport::auc_l);
  return a;
}

std::string aggregate_to_json(const AggregateReport& a) {
  json j;
  j["n_runs"] = a.n_runs;
  const std::pair<const char*, const MetricSummary*> fields[] = {
      {"f1_micro", &a.f1_micro}, {"f1_macro", &a.f1_macro}, {"f1_weighted", &a.f1_weighted},
      {"f1_binary", &a.f1_binary}, {"auc_p", &a.auc_p},     {"auc_l", &a.auc_l}};
  for (const auto& [name, s] : fields) j[name] = {{"mean", s->mean}, {"std", s->std}};
  return j.dump(2) + "\n";
}

std::string aggregate_to_text(const AggregateReport& a) {
  std::string out = header_row(14);
  char buf[48];
  for (const MetricSummary* s :
       {&a.f1_micro, &a.f1_macro, &a.f1_weighted, &a.f1_binary, &a.auc_p, &a.auc_l}) {
    std::snprintf(buf, sizeof buf, "%8.2f+-%4.2f", 100.0 * s->mean, 100.0 * s->std);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "\nruns=%zu\n", a.n_runs);
  return out + buf;
}

}  // namespace gsn
