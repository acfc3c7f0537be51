#include "gsn/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gsn/rng.hpp"

namespace gsn {

void SimConfig::validate() const {
  if (k == 0) throw std::invalid_argument("embedding dimension k must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(damping >= 0.0 && damping < 1.0)) throw std::invalid_argument("damping must lie in [0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

SimState init_state(std::size_t n_nodes, const SimConfig& config) {
  config.validate();
  if (n_nodes == 0) throw std::invalid_argument("graph has no nodes");
  SimState s{Matrix(n_nodes, config.k), Matrix(n_nodes, config.k), 0};
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t c = 0; c < config.k; ++c) {
      s.x(i, c) = rng::uniform_in(-1.0, 1.0, config.seed, rng::tags::init, i, c);
    }
  }
  return s;
}

namespace {

template <class T>
void check_finite(const BasicMatrix<T>& m, std::size_t step, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(i, c))) {
        throw SimulationError(step, std::string("non-finite ") + what + " at node " +
                                        std::to_string(i) + ", dim " + std::to_string(c));
      }
    }
  }
}

}  // namespace

template <class T>
void step(BasicSimState<T>& state, const ForceField& field, const SimConfig& config,
          BasicMatrix<T>& force) {
  if (!state.x.same_shape(state.v)) throw std::invalid_argument("X and V differ in shape");
  field.apply(state.x, force, state.t_step);

  const T dt = static_cast<T>(config.dt);
  const T keep = static_cast<T>(1.0 - config.damping);
  auto& x = state.x.values();
  auto& v = state.v.values();
  const auto& f = force.values();
  if (config.integrator == Integrator::explicit_euler) {
    for (std::size_t p = 0; p < x.size(); ++p) {
      x[p] += dt * v[p];
      v[p] = keep * v[p] + dt * f[p];
    }
  } else {
    for (std::size_t p = 0; p < x.size(); ++p) {
      v[p] = keep * v[p] + dt * f[p];
      x[p] += dt * v[p];
    }
  }
  check_finite(state.x, state.t_step, "position");
  check_finite(state.v, state.t_step, "velocity");
  ++state.t_step;
}

template <class T>
double mean_abs_velocity(const BasicMatrix<T>& v) {
  if (v.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    double s = 0.0;
    for (auto c : v.row(i)) s += static_cast<double>(c) * static_cast<double>(c);
    total += std::sqrt(s);
  }
  return total / static_cast<double>(v.rows());
}

template <class T>
BasicSimState<T> simulate(BasicSimState<T> state, const ForceField& field, const SimConfig& config,
                          const SimObserver& observer) {
  config.validate();
  BasicMatrix<T> force(state.x.rows(), state.x.cols());
  for (std::size_t n = 0; n < config.n_steps; ++n) {
    step(state, field, config, force);
    if (observer.trace) {
      TraceRow row;
      row.step = state.t_step;
      row.mean_abs_velocity = mean_abs_velocity(state.v);
      if (observer.loss) {
        if constexpr (std::is_same_v<T, double>) {
          row.loss = observer.loss(state.x);
        } else {
          row.loss = observer.loss(state.x.template cast<double>());
        }
      }
      observer.trace->push_back(row);
    }
  }
  return state;
}

template void step<double>(SimState&, const ForceField&, const SimConfig&, Matrix&);
template void step<float>(SimStateF&, const ForceField&, const SimConfig&, MatrixF&);
template SimState simulate<double>(SimState, const ForceField&, const SimConfig&,
                                   const SimObserver&);
template SimStateF simulate<float>(SimStateF, const ForceField&, const SimConfig&,
                                   const SimObserver&);
template double mean_abs_velocity<double>(const Matrix&);
template double mean_abs_velocity<float>(const MatrixF&);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,mean_abs_velocity,loss\n";
  char buf[128];
  for (const auto& r : trace) {
    if (std::isnan(r.loss)) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,\n", r.step, r.mean_abs_velocity);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", r.step, r.mean_abs_velocity, r.loss);
    }
    out << buf;
  }
}

}  // namespace gsn
