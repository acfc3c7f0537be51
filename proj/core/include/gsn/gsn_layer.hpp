#pragma once

// Graph Spring Network layer.
//
//   F_i = g(y_i) * sum_{j in N(i)} f(z_ij, d_ij) * (x_j - x_i) / d_ij
//
// Evaluation is node-centric over the CSR incidence lists: every node sums
// its own half-edges in ascending edge order, so the result is bitwise
// identical for any thread count. Cost is O(Mk + Nk) per call.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gsn/force_model.hpp"
#include "gsn/matrix.hpp"
#include "gsn/signed_graph.hpp"

namespace gsn {

struct ForceFieldOptions {
  /// Below this distance the edge direction is replaced by a keyed random
  /// unit vector so coincident nodes never divide by zero.
  double eps = 1e-9;
  std::uint64_t tie_seed = 0;
  FeatureOptions features;
  std::size_t threads = 1;
};

double pair_distance(std::span<const double> a, std::span<const double> b);
double pair_distance(std::span<const float> a, std::span<const float> b);

/// Unit vector used for edge `edge` at step `step` when its endpoints
/// coincide, oriented from the lower-id endpoint u toward v.
void tie_break_direction(std::uint64_t seed, std::size_t edge, std::size_t step,
                         std::span<double> out);

/// a_ij = f_val * (x_j - x_i) / d. When d < eps the direction is the
/// tie-break vector of `edge` (negated when `from_upper` is set, i.e. when
/// x_i belongs to the higher-id endpoint).
void edge_force(double f_val, std::span<const double> xi, std::span<const double> xj, double eps,
                std::span<double> out, std::uint64_t seed = 0, std::size_t edge = 0,
                std::size_t step = 0, bool from_upper = false);

/// Force field bound to one graph, its statics and one parameter set.
/// Per-node gains and the distance-independent part of every SPR-NN hidden
/// pre-activation are computed once at construction. The graph must outlive
/// the field.
class ForceField {
 public:
  ForceField(const SignedGraph& graph, const NodeStatics& statics, ForceParams params,
             ForceFieldOptions options = {});

  const SignedGraph& graph() const { return *graph_; }
  const ForceParams& params() const { return params_; }
  const ForceFieldOptions& options() const { return options_; }
  std::size_t n_params() const { return param_count(params_); }

  double gain(NodeId i) const { return gain_[i]; }
  /// Scalar edge law for the half-edge at CSR position h.
  double edge_law(std::size_t h, double dist) const;

  template <class T>
  void apply(const BasicMatrix<T>& x, BasicMatrix<T>& out, std::size_t step = 0) const;

  template <class T>
  BasicMatrix<T> apply(const BasicMatrix<T>& x, std::size_t step = 0) const {
    BasicMatrix<T> out(x.rows(), x.cols());
    apply(x, out, step);
    return out;
  }

  /// Vector-Jacobian product of F = apply(x, step) with cotangent `adj`:
  /// x_grad += (dF/dx)^T adj and theta_grad += (dF/dtheta)^T adj, the latter
  /// laid out like flatten(params()).
  void backward(const Matrix& x, const Matrix& adj, std::size_t step, Matrix& x_grad,
                std::span<double> theta_grad) const;

 private:
  void check_shape(std::size_t rows, std::size_t cols) const;
  void law_value_slope(std::size_t h, Sign s, double dist, double& f, double& df) const;
  void law_param_grad(std::size_t h, NodeId i, NodeId j, Sign s, double dist, double fbar,
                      double* grad) const;
  void gain_param_grad(NodeId i, double gbar, double* grad) const;

  const SignedGraph* graph_;
  const NodeStatics* statics_;
  ForceParams params_;
  ForceFieldOptions options_;
  std::vector<double> gain_;
  std::vector<Sign> half_sign_;
  // SPR-NN only: per half-edge, the 7 hidden pre-activations without the
  // distance term.
  std::vector<double> static_pre_;
};

/// Convenience wrapper: builds a ForceField and applies it once.
Matrix gsn_apply(const SignedGraph& graph, const NodeStatics& statics, const ForceParams& params,
                 const Matrix& x, const ForceFieldOptions& options = {}, std::size_t step = 0);

}  // namespace gsn
