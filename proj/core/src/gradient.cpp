#include "gsn/gradient.hpp"

#include <cmath>
#include <utility>

namespace gsn {

namespace {

bool all_finite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

GradResult grad_through_sim(const ForceField& field, const SimState& state0,
                            const SimConfig& config, const LossConfig& loss_config) {
  config.validate();
  const std::size_t n = config.n_steps;
  const double dt = config.dt;
  const double keep = 1.0 - config.damping;
  const bool semi = config.integrator == Integrator::semi_implicit;

  std::vector<Matrix> tape;
  tape.reserve(n);
  SimState state = state0;
  Matrix force;
  for (std::size_t t = 0; t < n; ++t) {
    tape.push_back(state.x);
    step(state, field, config, force);
  }

  GradResult result;
  result.tape_length = tape.size();
  Matrix xb(state.x.rows(), state.x.cols());
  result.loss = loss_with_grad(field.graph(), state.x, loss_config, &xb);
  result.final_x = std::move(state.x);
  result.grad.assign(field.n_params(), 0.0);

  Matrix vb(xb.rows(), xb.cols());
  Matrix fb(xb.rows(), xb.cols());
  for (std::size_t t = n; t-- > 0;) {
    auto& xs = xb.values();
    auto& vs = vb.values();
    auto& fs = fb.values();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (semi) {
        const double w = vs[i] + dt * xs[i];
        fs[i] = dt * w;
        vs[i] = keep * w;
      } else {
        fs[i] = dt * vs[i];
        vs[i] = dt * xs[i] + keep * vs[i];
      }
    }
    field.backward(tape[t], fb, state0.t_step + t, xb, result.grad);
    if (!all_finite(xs) || !all_finite(result.grad)) {
      throw SimulationError(state0.t_step + t, "non-finite gradient");
    }
    tape[t] = Matrix();
  }
  return result;
}

}  // namespace gsn
