#include "gsn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace gsn {

LossDomain parse_loss_domain(const std::string& name) {
  if (name == "visible_only") return LossDomain::visible_only;
  if (name == "all_edges_oracle") return LossDomain::all_edges_oracle;
  throw std::invalid_argument("unknown loss domain '" + name + "'");
}

TargetEncoding parse_target_encoding(const std::string& name) {
  if (name == "sign") return TargetEncoding::sign;
  if (name == "zero_one") return TargetEncoding::zero_one;
  throw std::invalid_argument("unknown target encoding '" + name + "'");
}

std::string to_string(LossDomain d) {
  return d == LossDomain::visible_only ? "visible_only" : "all_edges_oracle";
}

std::string to_string(TargetEncoding t) {
  return t == TargetEncoding::sign ? "sign" : "zero_one";
}

double predict_prob(double dist, double mu) { return 1.0 / (1.0 + std::exp(dist - mu)); }

double loss(const SignedGraph& graph, const Matrix& x, const LossConfig& config) {
  return loss_with_grad(graph, x, config, nullptr);
}

double loss_with_grad(const SignedGraph& graph, const Matrix& x, const LossConfig& config,
                      Matrix* x_grad) {
  if (!(config.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (x.rows() != graph.n_nodes()) throw std::invalid_argument("positions do not match graph");
  if (x_grad && !x_grad->same_shape(x)) throw std::invalid_argument("gradient shape mismatch");

  const bool visible = config.domain == LossDomain::visible_only;
  auto class_of = [&](const Edge& e) { return visible ? e.observed_sign : e.true_sign; };

  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (const auto& e : graph.edges()) {
    const Sign s = class_of(e);
    n_pos += s == Sign::positive;
    n_neg += s == Sign::negative;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("loss domain needs both positive and negative edges");
  }
  const double w_pos = 1.0 / static_cast<double>(n_pos);
  const double w_neg = 1.0 / static_cast<double>(n_neg);
  const std::size_t k = x.cols();

  double total = 0.0;
  for (const auto& e : graph.edges()) {
    const Sign s = class_of(e);
    if (s == Sign::neutral) continue;
    const double w = s == Sign::positive ? w_pos : w_neg;
    const double sigma = to_int(e.true_sign);
    const double target =
        config.target == TargetEncoding::sign ? sigma : 0.5 * (sigma + 1.0);

    const double* xu = x.data() + static_cast<std::size_t>(e.u) * k;
    const double* xv = x.data() + static_cast<std::size_t>(e.v) * k;
    double d2 = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double diff = xu[c] - xv[c];
      d2 += diff * diff;
    }
    const double d = std::sqrt(d2);
    const double p = predict_prob(d, config.mu);
    const double r = target - p;
    total += r * r * w;

    if (x_grad && d > 0.0) {
      const double dl_dd = 2.0 * r * w * p * (1.0 - p);
      const double s_scale = dl_dd / d;
      double* gu = x_grad->data() + static_cast<std::size_t>(e.u) * k;
      double* gv = x_grad->data() + static_cast<std::size_t>(e.v) * k;
      for (std::size_t c = 0; c < k; ++c) {
        const double g = s_scale * (xu[c] - xv[c]);
        gu[c] += g;
        gv[c] -= g;
      }
    }
  }
  return total;
}

}  // namespace gsn
