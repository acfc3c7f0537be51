#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsn/matrix.hpp"
#include "gsn/signed_graph.hpp"

namespace gsn {

struct Prediction {
  NodeId u = 0;
  NodeId v = 0;
  Sign true_sign = Sign::positive;
  double prob = 0.0;
  Sign pred_sign = Sign::positive;  // +1 iff prob >= 0.5
};

using PredictionSet = std::vector<Prediction>;

/// Logistic map prob = 1 / (1 + exp(-(intercept + slope * d))). The fixed
/// decision rule is intercept = mu, slope = -1.
struct Calibration {
  double intercept = 2.5;
  double slope = -1.0;

  static Calibration fixed(double mu) { return {mu, -1.0}; }
  double prob(double dist) const;
};

/// Fits the calibration by Newton-iterated logistic regression of the
/// visible signs (+1 vs -1) on endpoint distances.
Calibration fit_calibration(const SignedGraph& graph, const Matrix& x);

PredictionSet predict(const SignedGraph& graph, std::span<const std::size_t> hidden,
                      const Matrix& x, double mu);
PredictionSet predict(const SignedGraph& graph, std::span<const std::size_t> hidden,
                      const Matrix& x, const Calibration& calibration);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
  double weighted = 0.0;
  double binary = 0.0;
};

/// Labels must be +1 or -1. A class with zero precision or recall
/// denominator gets F1 = 0.
F1Scores f1_scores(std::span<const Sign> truths, std::span<const Sign> preds);

/// Mann-Whitney AUC with midranks: the probability that a random positive
/// outranks a random negative, ties counting one half. Both classes must be
/// present.
double auc(std::span<const double> scores, std::span<const Sign> truths);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

Confusion confusion(std::span<const Sign> truths, std::span<const Sign> preds);

struct MetricsReport {
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  double f1_binary = 0.0;
  double auc_p = 0.0;
  double auc_l = 0.0;
  Confusion counts;
  std::size_t n_hidden = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

MetricsReport evaluate(const PredictionSet& predictions);
MetricsReport evaluate(const SignedGraph& graph, std::span<const std::size_t> hidden,
                       const Matrix& x, double mu);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);
/// Aligned table with the columns F1-MI F1-MA F1-WT F1-BI AUC-P AUC-L, in
/// percent.
std::string report_to_text(const MetricsReport& report);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run
};

struct AggregateReport {
  std::size_t n_runs = 0;
  MetricSummary f1_micro, f1_macro, f1_weighted, f1_binary, auc_p, auc_l;
};

AggregateReport aggregate(std::span<const MetricsReport> reports);
std::string aggregate_to_json(const AggregateReport& agg);
std::string aggregate_to_text(const AggregateReport& agg);

}  // namespace gsn
