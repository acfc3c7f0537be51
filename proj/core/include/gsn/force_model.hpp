#pragma once

// Scalar force laws for the spring layer.
//
// Two families are provided:
//  * SPR: Hooke-style springs with one resting length and stiffness per
//    observed sign, plus a degree-dependent node gain beta.
//  * SPR-NN: one 7-7-1 ReLU network per observed sign for the edge law and a
//    3-3-1 network for the node gain (3 * 64 + 16 = 208 parameters).
//
// The edge law f returns a signed magnitude along the unit vector pointing
// from x_i to x_j: positive values attract, negative values repel.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gsn/signed_graph.hpp"

namespace gsn {

struct SprParams {
  double l_pos = 1.0;
  double l_neu = 2.0;
  double l_neg = 3.0;
  double a_pos = 1.0;
  double a_neu = 1.0;
  double a_neg = 1.0;
  double beta = 0.0;

  static constexpr std::size_t kSize = 7;
};

/// Single hidden layer perceptron: w1 . relu(w0 x + b0) + b1.
/// w0 is hidden x in, row-major.
struct MlpParams {
  std::size_t in = 0;
  std::size_t hidden = 0;
  std::vector<double> w0;
  std::vector<double> b0;
  std::vector<double> w1;
  double b1 = 0.0;

  static MlpParams zeros(std::size_t in, std::size_t hidden);
  std::size_t size() const { return hidden * in + hidden + hidden + 1; }
  /// Throws if the vectors disagree with (in, hidden) or hold non-finite values.
  void validate() const;
};

double mlp_eval(const MlpParams& p, std::span<const double> x);

inline constexpr std::size_t kEdgeFeatureWidth = 7;
inline constexpr std::size_t kNodeFeatureWidth = 3;

struct SprNnParams {
  MlpParams g_net = MlpParams::zeros(kNodeFeatureWidth, 3);
  MlpParams f_neutral = MlpParams::zeros(kEdgeFeatureWidth, 7);
  MlpParams f_positive = MlpParams::zeros(kEdgeFeatureWidth, 7);
  MlpParams f_negative = MlpParams::zeros(kEdgeFeatureWidth, 7);

  static constexpr std::size_t kSize = 3 * (7 * 7 + 7 + 7 + 1) + (3 * 3 + 3 + 3 + 1);

  const MlpParams& edge_net(Sign s) const;
  MlpParams& edge_net(Sign s);
};

using ForceParams = std::variant<SprParams, SprNnParams>;

enum class ModelKind { spr, spr_nn };

ModelKind kind_of(const ForceParams& p);
ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// Edge input z_ij, in the order [d, deg_i, deg_j, neg_i, neg_j, pos_i, pos_j].
struct EdgeFeature {
  double dist = 0.0;
  double deg_i = 0.0;
  double deg_j = 0.0;
  double neg_i = 0.0;
  double neg_j = 0.0;
  double pos_i = 0.0;
  double pos_j = 0.0;

  std::array<double, kEdgeFeatureWidth> as_array() const {
    return {dist, deg_i, deg_j, neg_i, neg_j, pos_i, pos_j};
  }
};

/// Per-node inputs. SPR reads (deg, p80); SPR-NN reads (deg_feature, neg_frac,
/// pos_frac) where deg_feature is min(1, deg/p80) unless raw degrees are
/// requested.
struct NodeFeature {
  double deg = 0.0;
  double p80 = 1.0;
  double neg_frac = 0.0;
  double pos_frac = 0.0;
  bool raw_degree = false;

  double deg_feature() const;
  std::array<double, kNodeFeatureWidth> as_array() const {
    return {deg_feature(), neg_frac, pos_frac};
  }
};

struct FeatureOptions {
  /// Feed literal degrees into the networks instead of min(1, deg/p80).
  bool raw_degree = false;
};

NodeFeature node_feature(const NodeStatics& statics, NodeId i, const FeatureOptions& opt = {});
/// Static part of z_ij with dist left at zero.
EdgeFeature edge_feature(const NodeStatics& statics, NodeId i, NodeId j,
                         const FeatureOptions& opt = {});

double spr_f(const SprParams& p, Sign observed, double dist);
double spr_g(const SprParams& p, const NodeFeature& node);
double sprnn_f(const SprNnParams& p, Sign observed, const EdgeFeature& z);
double sprnn_g(const SprNnParams& p, const NodeFeature& node);

/// SPR starts from ordered resting lengths (1, 2, 3), unit stiffness, beta 0.
/// SPR-NN draws weights from U(-s, s), s = sqrt(6 / (fan_in + fan_out)), with
/// zero biases.
ForceParams init_params(ModelKind kind, std::uint64_t seed);

std::size_t param_count(const ForceParams& p);

/// Flat parameter vector. SPR: [l_pos, l_neu, l_neg, a_pos, a_neu, a_neg,
/// beta]. SPR-NN: g_net, f_neutral, f_positive, f_negative, each laid out as
/// [w0 (row-major), w1, b0, b1].
std::vector<double> flatten(const ForceParams& p);
void unflatten(ForceParams& p, std::span<const double> flat);

std::vector<std::string> param_names(const ForceParams& p);

}  // namespace gsn
