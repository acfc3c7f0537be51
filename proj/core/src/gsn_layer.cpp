#include "gsn/gsn_layer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsn/parallel.hpp"
#include "gsn/rng.hpp"

namespace gsn {

namespace {

template <class T>
double distance_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vectors differ in length");
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = static_cast<double>(b[c]) - static_cast<double>(a[c]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Block offsets of the four networks inside the flat SPR-NN vector.
struct NetLayout {
  std::size_t offset;
  std::size_t in;
  std::size_t hidden;
  std::size_t w0() const { return offset; }
  std::size_t w1() const { return offset + hidden * in; }
  std::size_t b0() const { return offset + hidden * in + hidden; }
  std::size_t b1() const { return offset + hidden * in + 2 * hidden; }
};

constexpr NetLayout kGainNet{0, kNodeFeatureWidth, 3};
constexpr std::size_t kEdgeNetSize = 7 * kEdgeFeatureWidth + 7 + 7 + 1;

NetLayout edge_layout(Sign s) {
  const std::size_t base = 3 * 3 + 3 + 3 + 1;
  switch (s) {
    case Sign::neutral: return {base, kEdgeFeatureWidth, 7};
    case Sign::positive: return {base + kEdgeNetSize, kEdgeFeatureWidth, 7};
    case Sign::negative: return {base + 2 * kEdgeNetSize, kEdgeFeatureWidth, 7};
  }
  throw std::logic_error("invalid sign");
}

// Gradient of w1 . relu(w0 x + b0) + b1 with respect to the network weights,
// scaled by outbar and accumulated into grad at the given layout.
void mlp_param_grad(const MlpParams& net, std::span<const double> x, const double* pre_override,
                    double outbar, const NetLayout& layout, double* grad) {
  for (std::size_t h = 0; h < net.hidden; ++h) {
    double pre;
    if (pre_override) {
      pre = pre_override[h];
    } else {
      pre = net.b0[h];
      for (std::size_t c = 0; c < net.in; ++c) pre += net.w0[h * net.in + c] * x[c];
    }
    if (!(pre > 0.0)) continue;
    grad[layout.w1() + h] += outbar * pre;
    const double prebar = outbar * net.w1[h];
    grad[layout.b0() + h] += prebar;
    double* row = grad + layout.w0() + h * net.in;
    for (std::size_t c = 0; c < net.in; ++c) row[c] += prebar * x[c];
  }
  grad[layout.b1()] += outbar;
}

}  // namespace

double pair_distance(std::span<const double> a, std::span<const double> b) {
  return distance_impl(a, b);
}

double pair_distance(std::span<const float> a, std::span<const float> b) {
  return distance_impl(a, b);
}

void tie_break_direction(std::uint64_t seed, std::size_t edge, std::size_t step,
                         std::span<double> out) {
  double norm2 = 0.0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    norm2 = 0.0;
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] = rng::normal(seed, rng::tags::tie_break, edge, step, (attempt << 32) | c);
      norm2 += out[c] * out[c];
    }
    if (norm2 > 1e-24 || out.empty()) break;
  }
  const double inv = out.empty() ? 0.0 : 1.0 / std::sqrt(norm2);
  for (double& v : out) v *= inv;
}

void edge_force(double f_val, std::span<const double> xi, std::span<const double> xj, double eps,
                std::span<double> out, std::uint64_t seed, std::size_t edge, std::size_t step,
                bool from_upper) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (xi.size() != xj.size() || out.size() != xi.size()) {
    throw std::invalid_argument("vectors differ in length");
  }
  const double d = pair_distance(xi, xj);
  if (d >= eps) {
    const double s = f_val / d;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = s * (xj[c] - xi[c]);
    return;
  }
  tie_break_direction(seed, edge, step, out);
  const double s = from_upper ? -f_val : f_val;
  for (double& v : out) v *= s;
}

ForceField::ForceField(const SignedGraph& graph, const NodeStatics& statics, ForceParams params,
                       ForceFieldOptions options)
    : graph_(&graph), statics_(&statics), params_(std::move(params)), options_(options) {
  if (statics.size() != graph.n_nodes()) {
    throw std::invalid_argument("node statics do not match the graph");
  }
  if (!(options_.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const std::size_t n = graph.n_nodes();
  const auto halves = graph.half_edges();

  half_sign_.resize(halves.size());
  for (std::size_t h = 0; h < halves.size(); ++h) {
    half_sign_[h] = graph.edge(halves[h].edge).observed_sign;
  }

  gain_.resize(n);
  if (const auto* spr = std::get_if<SprParams>(&params_)) {
    for (NodeId i = 0; i < n; ++i) {
      gain_[i] = statics.p80 > 0.0 ? spr_g(*spr, node_feature(statics, i)) : 1.0;
    }
    return;
  }

  const auto& nn = std::get<SprNnParams>(params_);
  for (NodeId i = 0; i < n; ++i) {
    gain_[i] = sprnn_g(nn, node_feature(statics, i, options_.features));
  }
  static_pre_.resize(halves.size() * 7);
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t h = graph.half_edge_offset(i); h < graph.half_edge_offset(i + 1); ++h) {
      const auto& net = nn.edge_net(half_sign_[h]);
      const auto z = edge_feature(statics, i, halves[h].neighbor, options_.features).as_array();
      for (std::size_t k = 0; k < 7; ++k) {
        double pre = net.b0[k];
        for (std::size_t c = 1; c < kEdgeFeatureWidth; ++c) pre += net.w0[k * kEdgeFeatureWidth + c] * z[c];
        static_pre_[h * 7 + k] = pre;
      }
    }
  }
}

void ForceField::law_value_slope(std::size_t h, Sign s, double dist, double& f, double& df) const {
  if (const auto* p = std::get_if<SprParams>(&params_)) {
    switch (s) {
      case Sign::neutral:
        f = p->a_neu * (dist - p->l_neu);
        df = p->a_neu;
        return;
      case Sign::positive:
        if (dist > p->l_pos) {
          f = p->a_pos * (dist - p->l_pos);
          df = p->a_pos;
        } else {
          f = 0.0;
          df = 0.0;
        }
        return;
      case Sign::negative:
        if (p->l_neg > dist) {
          f = -p->a_neg * (p->l_neg - dist);
          df = p->a_neg;
        } else {
          f = 0.0;
          df = 0.0;
        }
        return;
    }
  }
  const auto& net = std::get<SprNnParams>(params_).edge_net(s);
  const double* pre0 = static_pre_.data() + h * 7;
  f = net.b1;
  df = 0.0;
  for (std::size_t k = 0; k < 7; ++k) {
    const double wd = net.w0[k * kEdgeFeatureWidth];
    const double pre = pre0[k] + wd * dist;
    if (pre > 0.0) {
      f += net.w1[k] * pre;
      df += net.w1[k] * wd;
    }
  }
}

double ForceField::edge_law(std::size_t h, double dist) const {
  double f = 0.0;
  double df = 0.0;
  law_value_slope(h, half_sign_[h], dist, f, df);
  return f;
}

void ForceField::law_param_grad(std::size_t h, NodeId i, NodeId j, Sign s, double dist,
                                double fbar, double* grad) const {
  if (const auto* p = std::get_if<SprParams>(&params_)) {
    switch (s) {
      case Sign::neutral:
        grad[4] += fbar * (dist - p->l_neu);
        grad[1] -= fbar * p->a_neu;
        return;
      case Sign::positive:
        if (dist > p->l_pos) {
          grad[3] += fbar * (dist - p->l_pos);
          grad[0] -= fbar * p->a_pos;
        }
        return;
      case Sign::negative:
        if (p->l_neg > dist) {
          grad[5] -= fbar * (p->l_neg - dist);
          grad[2] -= fbar * p->a_neg;
        }
        return;
    }
  }
  const auto& net = std::get<SprNnParams>(params_).edge_net(s);
  auto z = edge_feature(*statics_, i, j, options_.features).as_array();
  z[0] = dist;
  double pre[7];
  for (std::size_t k = 0; k < 7; ++k) {
    pre[k] = static_pre_[h * 7 + k] + net.w0[k * kEdgeFeatureWidth] * dist;
  }
  mlp_param_grad(net, z, pre, fbar, edge_layout(s), grad);
}

void ForceField::gain_param_grad(NodeId i, double gbar, double* grad) const {
  if (std::holds_alternative<SprParams>(params_)) {
    if (statics_->p80 > 0.0) {
      grad[6] += gbar * std::min(1.0, static_cast<double>(statics_->deg[i]) / statics_->p80);
    }
    return;
  }
  const auto& net = std::get<SprNnParams>(params_).g_net;
  const auto y = node_feature(*statics_, i, options_.features).as_array();
  mlp_param_grad(net, y, nullptr, gbar, kGainNet, grad);
}

void ForceField::check_shape(std::size_t rows, std::size_t cols) const {
  if (rows != graph_->n_nodes()) {
    throw std::invalid_argument("position matrix has " + std::to_string(rows) +
                                " rows, graph has " + std::to_string(graph_->n_nodes()) +
                                " nodes");
  }
  if (cols == 0) throw std::invalid_argument("embedding dimension must be positive");
}

template <class T>
void ForceField::apply(const BasicMatrix<T>& x, BasicMatrix<T>& out, std::size_t step) const {
  check_shape(x.rows(), x.cols());
  if (!out.same_shape(x)) out = BasicMatrix<T>(x.rows(), x.cols());
  const std::size_t k = x.cols();
  const auto halves = graph_->half_edges();

  parallel_chunks(graph_->n_nodes(), options_.threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<T> acc(k);
    std::vector<double> tie(k);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(acc.begin(), acc.end(), T{});
      const T* xi = x.data() + i * k;
      for (std::size_t h = graph_->half_edge_offset(i); h < graph_->half_edge_offset(i + 1); ++h) {
        const auto& he = halves[h];
        const T* xj = x.data() + static_cast<std::size_t>(he.neighbor) * k;
        double d2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double diff = static_cast<double>(xj[c]) - static_cast<double>(xi[c]);
          d2 += diff * diff;
        }
        const double d = std::sqrt(d2);
        const double f = edge_law(h, d);
        if (d >= options_.eps) {
          const T s = static_cast<T>(f / d);
          for (std::size_t c = 0; c < k; ++c) acc[c] += s * (xj[c] - xi[c]);
        } else {
          tie_break_direction(options_.tie_seed, he.edge, step, tie);
          const double s = graph_->edge(he.edge).u == i ? f : -f;
          for (std::size_t c = 0; c < k; ++c) acc[c] += static_cast<T>(s * tie[c]);
        }
      }
      const T g = static_cast<T>(gain_[i]);
      T* oi = out.data() + i * k;
      for (std::size_t c = 0; c < k; ++c) oi[c] = g * acc[c];
    }
  });
}

template void ForceField::apply<double>(const Matrix&, Matrix&, std::size_t) const;
template void ForceField::apply<float>(const MatrixF&, MatrixF&, std::size_t) const;

void ForceField::backward(const Matrix& x, const Matrix& adj, std::size_t step, Matrix& x_grad,
                          std::span<double> theta_grad) const {
  check_shape(x.rows(), x.cols());
  if (!adj.same_shape(x) || !x_grad.same_shape(x)) {
    throw std::invalid_argument("backward: cotangent and gradient must match positions");
  }
  const std::size_t n_params = param_count(params_);
  if (theta_grad.size() != n_params) throw std::invalid_argument("backward: theta_grad size");

  const std::size_t k = x.cols();
  const std::size_t n = graph_->n_nodes();
  const auto halves = graph_->half_edges();
  std::vector<std::vector<double>> partial(chunk_count(n));

  parallel_chunks(n, options_.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<double> grad(n_params, 0.0);
    std::vector<double> xg(k), sum(k), u(k), cbar_i(k), cbar_j(k), tie(k);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(xg.begin(), xg.end(), 0.0);
      std::fill(sum.begin(), sum.end(), 0.0);
      const double* xi = x.data() + i * k;
      const double* ai = adj.data() + i * k;
      for (std::size_t c = 0; c < k; ++c) cbar_i[c] = gain_[i] * ai[c];

      for (std::size_t h = graph_->half_edge_offset(i); h < graph_->half_edge_offset(i + 1); ++h) {
        const auto& he = halves[h];
        const NodeId j = he.neighbor;
        const double* xj = x.data() + static_cast<std::size_t>(j) * k;
        const Sign s = half_sign_[h];
        double d2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double diff = xj[c] - xi[c];
          d2 += diff * diff;
        }
        const double d = std::sqrt(d2);
        double f = 0.0;
        double df = 0.0;
        law_value_slope(h, s, d, f, df);

        if (d < options_.eps) {
          tie_break_direction(options_.tie_seed, he.edge, step, tie);
          const double orient = graph_->edge(he.edge).u == i ? 1.0 : -1.0;
          double fbar = 0.0;
          for (std::size_t c = 0; c < k; ++c) {
            sum[c] += f * orient * tie[c];
            fbar += cbar_i[c] * orient * tie[c];
          }
          law_param_grad(h, static_cast<NodeId>(i), j, s, d, fbar, grad.data());
          continue;
        }

        const double inv_d = 1.0 / d;
        double cu = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          u[c] = (xj[c] - xi[c]) * inv_d;
          cu += cbar_i[c] * u[c];
          sum[c] += f * u[c];
        }
        // Own half-edge: c_ij = f(d) u with u = (x_j - x_i)/d.
        const double own_t = f * inv_d;
        const double own_r = df * cu - own_t * cu;
        for (std::size_t c = 0; c < k; ++c) xg[c] -= own_t * cbar_i[c] + own_r * u[c];
        law_param_grad(h, static_cast<NodeId>(i), j, s, d, cu, grad.data());

        // Twin half-edge j -> i contributes through w = x_i - x_j.
        const double* aj = adj.data() + static_cast<std::size_t>(j) * k;
        double ft = 0.0;
        double dft = 0.0;
        law_value_slope(he.twin, s, d, ft, dft);
        double cu_t = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          cbar_j[c] = gain_[j] * aj[c];
          cu_t -= cbar_j[c] * u[c];
        }
        const double tw_t = ft * inv_d;
        const double tw_r = dft * cu_t - tw_t * cu_t;
        for (std::size_t c = 0; c < k; ++c) xg[c] += tw_t * cbar_j[c] - tw_r * u[c];
      }

      double gbar = 0.0;
      for (std::size_t c = 0; c < k; ++c) gbar += ai[c] * sum[c];
      gain_param_grad(static_cast<NodeId>(i), gbar, grad.data());

      double* gi = x_grad.data() + i * k;
      for (std::size_t c = 0; c < k; ++c) gi[c] += xg[c];
    }
    partial[chunk] = std::move(grad);
  });

  for (const auto& part : partial) {
    for (std::size_t p = 0; p < n_params; ++p) theta_grad[p] += part[p];
  }
}

Matrix gsn_apply(const SignedGraph& graph, const NodeStatics& statics, const ForceParams& params,
                 const Matrix& x, const ForceFieldOptions& options, std::size_t step) {
  ForceField field(graph, statics, params, options);
  return field.apply(x, step);
}

}  // namespace gsn
