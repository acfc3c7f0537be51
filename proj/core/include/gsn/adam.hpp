#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gsn {

struct AdamConfig {
  double lr = 0.03;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;

  static AdamState zeros(std::size_t n, const AdamConfig& config);
};

/// Bias-corrected Adam update, in place:
///   m = b1 m + (1-b1) g;  v = b2 v + (1-b2) g^2
///   p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad);

/// Elementwise clamp to [lo, hi].
std::vector<double> clip_gradient(std::span<const double> grad, double lo = -1.0, double hi = 1.0);

}  // namespace gsn
