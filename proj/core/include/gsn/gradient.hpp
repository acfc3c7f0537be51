#pragma once

// Reverse-mode gradient of loss(simulate(S0; theta)) with respect to theta.
//
// The forward pass stores every position matrix at which forces are
// evaluated (a store-all tape, memory linear in n_steps). The backward pass
// walks the tape in reverse. With Xb, Vb the adjoints of X(t+1), V(t+1):
//
//   explicit Euler:  Fb = dt Vb;  Vb' = dt Xb + (1-d) Vb;  Xb' = Xb + J^T Fb
//   semi-implicit:   W = Vb + dt Xb;  Fb = dt W;  Vb' = (1-d) W;  Xb' = Xb + J^T Fb
//
// and every step adds (dF/dtheta)^T Fb to the parameter gradient.

#include <cstddef>
#include <vector>

#include "gsn/gsn_layer.hpp"
#include "gsn/loss.hpp"
#include "gsn/simulator.hpp"

namespace gsn {

struct GradResult {
  double loss = 0.0;
  /// Aligned with flatten(field.params()).
  std::vector<double> grad;
  /// Number of position matrices recorded on the tape (equals n_steps).
  std::size_t tape_length = 0;
  /// Final embeddings of the forward pass.
  Matrix final_x;
};

/// Throws SimulationError on a non-finite forward state or gradient; the
/// reported step is the solver step where it first appeared.
GradResult grad_through_sim(const ForceField& field, const SimState& state0,
                            const SimConfig& config, const LossConfig& loss_config);

}  // namespace gsn
