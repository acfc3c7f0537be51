#pragma once

#include <cstddef>
#include <string>

#include "gsn/matrix.hpp"
#include "gsn/signed_graph.hpp"

namespace gsn {

enum class LossDomain {
  visible_only,      // edges whose observed sign is +1 or -1
  all_edges_oracle,  // every edge, weighted by its true sign (ablation only)
};

enum class TargetEncoding {
  sign,      // target is the true sign in {-1, +1}
  zero_one,  // target is (sign + 1) / 2
};

LossDomain parse_loss_domain(const std::string& name);
TargetEncoding parse_target_encoding(const std::string& name);
std::string to_string(LossDomain d);
std::string to_string(TargetEncoding t);

struct LossConfig {
  double mu = 2.5;
  LossDomain domain = LossDomain::visible_only;
  TargetEncoding target = TargetEncoding::sign;
};

/// Logistic edge probability 1 / (1 + exp(dist - mu)); 0.5 at dist == mu.
double predict_prob(double dist, double mu);

/// Weighted squared error sum over the loss domain of
/// (target - predict_prob(d_uv))^2 * w, with w = 1/|E+| or 1/|E-| by class.
/// Throws when the domain lacks one of the two classes.
double loss(const SignedGraph& graph, const Matrix& x, const LossConfig& config);

/// Same value; additionally accumulates dL/dX into x_grad when non-null.
double loss_with_grad(const SignedGraph& graph, const Matrix& x, const LossConfig& config,
                      Matrix* x_grad);

}  // namespace gsn
