#include "gsn/adam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsn {

AdamState AdamState::zeros(std::size_t n, const AdamConfig& config) {
  return {config, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0};
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad) {
  if (params.size() != grad.size() || state.m.size() != grad.size() ||
      state.v.size() != grad.size()) {
    throw std::invalid_argument("adam_step: parameter, gradient and moment sizes differ");
  }
  const auto& c = state.config;
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grad[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

std::vector<double> clip_gradient(std::span<const double> grad, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("clip bounds must satisfy lo < hi");
  std::vector<double> out(grad.begin(), grad.end());
  for (double& g : out) g = std::clamp(g, lo, hi);
  return out;
}

}  // namespace gsn
