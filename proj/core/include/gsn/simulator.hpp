#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsn/gsn_layer.hpp"
#include "gsn/matrix.hpp"

namespace gsn {

enum class Integrator {
  /// X(t+dt) = X(t) + dt V(t); V(t+dt) = (1-d) V(t) + dt F(t).
  explicit_euler,
  /// Velocity first, then X(t+dt) = X(t) + dt V(t+dt).
  semi_implicit,
};

struct SimConfig {
  std::size_t k = 64;
  double dt = 0.005;
  double damping = 0.05;
  std::size_t n_steps = 120;
  std::uint64_t seed = 0;
  double eps = 1e-9;
  Integrator integrator = Integrator::explicit_euler;

  void validate() const;
};

template <class T>
struct BasicSimState {
  BasicMatrix<T> x;
  BasicMatrix<T> v;
  std::size_t t_step = 0;
};

using SimState = BasicSimState<double>;
using SimStateF = BasicSimState<float>;

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step), detail_(what) {}
  std::size_t step() const noexcept { return step_; }
  /// The message without the step prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t step_;
  std::string detail_;
};

/// X entries i.i.d. U(-1, 1) keyed on (seed, "init", node, dim); V = 0.
SimState init_state(std::size_t n_nodes, const SimConfig& config);

/// One update. Forces are evaluated at X(t); both position and velocity
/// updates read the state at time t in explicit mode.
template <class T>
void step(BasicSimState<T>& state, const ForceField& field, const SimConfig& config,
          BasicMatrix<T>& force_scratch);

template <class T>
void step(BasicSimState<T>& state, const ForceField& field, const SimConfig& config) {
  BasicMatrix<T> scratch;
  step(state, field, config, scratch);
}

struct TraceRow {
  std::size_t step = 0;
  double mean_abs_velocity = 0.0;
  double loss = std::numeric_limits<double>::quiet_NaN();
};

struct SimObserver {
  /// Evaluated on positions after every step when set; recorded in the trace.
  std::function<double(const Matrix&)> loss;
  std::vector<TraceRow>* trace = nullptr;
};

/// Applies config.n_steps updates to state0 and returns the final state.
template <class T>
BasicSimState<T> simulate(BasicSimState<T> state0, const ForceField& field,
                          const SimConfig& config, const SimObserver& observer = {});

/// Mean over nodes of the Euclidean norm of each velocity row.
template <class T>
double mean_abs_velocity(const BasicMatrix<T>& v);

template <class T>
const BasicMatrix<T>& embeddings(const BasicSimState<T>& state) {
  return state.x;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

}  // namespace gsn
