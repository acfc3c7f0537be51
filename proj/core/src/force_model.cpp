#include "gsn/force_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gsn/rng.hpp"

namespace gsn {

MlpParams MlpParams::zeros(std::size_t in, std::size_t hidden) {
  MlpParams p;
  p.in = in;
  p.hidden = hidden;
  p.w0.assign(hidden * in, 0.0);
  p.b0.assign(hidden, 0.0);
  p.w1.assign(hidden, 0.0);
  p.b1 = 0.0;
  return p;
}

void MlpParams::validate() const {
  if (w0.size() != hidden * in || b0.size() != hidden || w1.size() != hidden) {
    throw std::invalid_argument("MLP parameter shapes do not match (in, hidden)");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(w0.begin(), w0.end(), finite) || !std::all_of(b0.begin(), b0.end(), finite) ||
      !std::all_of(w1.begin(), w1.end(), finite) || !std::isfinite(b1)) {
    throw std::invalid_argument("MLP parameters must be finite");
  }
}

double mlp_eval(const MlpParams& p, std::span<const double> x) {
  if (x.size() != p.in) {
    throw std::invalid_argument("MLP input has width " + std::to_string(x.size()) + ", expected " +
                                std::to_string(p.in));
  }
  double out = p.b1;
  for (std::size_t h = 0; h < p.hidden; ++h) {
    double pre = p.b0[h];
    const double* row = p.w0.data() + h * p.in;
    for (std::size_t c = 0; c < p.in; ++c) pre += row[c] * x[c];
    if (pre > 0.0) out += p.w1[h] * pre;
  }
  return out;
}

const MlpParams& SprNnParams::edge_net(Sign s) const {
  switch (s) {
    case Sign::neutral: return f_neutral;
    case Sign::positive: return f_positive;
    case Sign::negative: return f_negative;
  }
  throw std::logic_error("invalid sign");
}

MlpParams& SprNnParams::edge_net(Sign s) {
  return const_cast<MlpParams&>(std::as_const(*this).edge_net(s));
}

ModelKind kind_of(const ForceParams& p) {
  return std::holds_alternative<SprParams>(p) ? ModelKind::spr : ModelKind::spr_nn;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "spr") return ModelKind::spr;
  if (name == "spr-nn" || name == "spr_nn") return ModelKind::spr_nn;
  throw std::invalid_argument("unknown model '" + name + "' (expected spr or spr-nn)");
}

std::string to_string(ModelKind kind) { return kind == ModelKind::spr ? "spr" : "spr-nn"; }

double NodeFeature::deg_feature() const {
  if (raw_degree) return deg;
  return p80 > 0.0 ? std::min(1.0, deg / p80) : 0.0;
}

NodeFeature node_feature(const NodeStatics& statics, NodeId i, const FeatureOptions& opt) {
  return {static_cast<double>(statics.deg[i]), statics.p80, statics.neg_frac[i],
          statics.pos_frac[i], opt.raw_degree};
}

EdgeFeature edge_feature(const NodeStatics& statics, NodeId i, NodeId j,
                         const FeatureOptions& opt) {
  const auto ni = node_feature(statics, i, opt);
  const auto nj = node_feature(statics, j, opt);
  return {0.0,         ni.deg_feature(), nj.deg_feature(), ni.neg_frac,
          nj.neg_frac, ni.pos_frac,      nj.pos_frac};
}

double spr_f(const SprParams& p, Sign observed, double dist) {
  switch (observed) {
    case Sign::neutral: return p.a_neu * (dist - p.l_neu);
    case Sign::positive: return p.a_pos * std::max(dist - p.l_pos, 0.0);
    case Sign::negative: return -p.a_neg * std::max(p.l_neg - dist, 0.0);
  }
  return 0.0;
}

double spr_g(const SprParams& p, const NodeFeature& node) {
  if (!(node.p80 > 0.0)) throw std::invalid_argument("p80 must be positive");
  return std::min(1.0, node.deg / node.p80) * p.beta + 1.0;
}

double sprnn_f(const SprNnParams& p, Sign observed, const EdgeFeature& z) {
  const auto x = z.as_array();
  return mlp_eval(p.edge_net(observed), x);
}

double sprnn_g(const SprNnParams& p, const NodeFeature& node) {
  const auto x = node.as_array();
  return mlp_eval(p.g_net, x);
}

namespace {

void glorot(MlpParams& net, std::uint64_t seed, std::uint64_t block) {
  const double s0 = std::sqrt(6.0 / static_cast<double>(net.in + net.hidden));
  const double s1 = std::sqrt(6.0 / static_cast<double>(net.hidden + 1));
  for (std::size_t i = 0; i < net.w0.size(); ++i) {
    net.w0[i] = rng::uniform_in(-s0, s0, seed, rng::tags::params, block, 0, i);
  }
  for (std::size_t i = 0; i < net.w1.size(); ++i) {
    net.w1[i] = rng::uniform_in(-s1, s1, seed, rng::tags::params, block, 1, i);
  }
}

template <class Fn>
void for_each_net(SprNnParams& p, Fn&& fn) {
  fn(p.g_net);
  fn(p.f_neutral);
  fn(p.f_positive);
  fn(p.f_negative);
}

template <class Fn>
void for_each_net(const SprNnParams& p, Fn&& fn) {
  fn(p.g_net);
  fn(p.f_neutral);
  fn(p.f_positive);
  fn(p.f_negative);
}

}  // namespace

ForceParams init_params(ModelKind kind, std::uint64_t seed) {
  if (kind == ModelKind::spr) return SprParams{};
  SprNnParams p;
  std::uint64_t block = 0;
  for_each_net(p, [&](MlpParams& net) { glorot(net, seed, block++); });
  return p;
}

std::size_t param_count(const ForceParams& p) {
  return kind_of(p) == ModelKind::spr ? SprParams::kSize : SprNnParams::kSize;
}

std::vector<double> flatten(const ForceParams& p) {
  if (const auto* s = std::get_if<SprParams>(&p)) {
    return {s->l_pos, s->l_neu, s->l_neg, s->a_pos, s->a_neu, s->a_neg, s->beta};
  }
  std::vector<double> flat;
  flat.reserve(SprNnParams::kSize);
  for_each_net(std::get<SprNnParams>(p), [&](const MlpParams& net) {
    flat.insert(flat.end(), net.w0.begin(), net.w0.end());
    flat.insert(flat.end(), net.w1.begin(), net.w1.end());
    flat.insert(flat.end(), net.b0.begin(), net.b0.end());
    flat.push_back(net.b1);
  });
  return flat;
}

void unflatten(ForceParams& p, std::span<const double> flat) {
  if (flat.size() != param_count(p)) {
    throw std::invalid_argument("flat parameter vector has wrong length");
  }
  if (auto* s = std::get_if<SprParams>(&p)) {
    *s = {flat[0], flat[1], flat[2], flat[3], flat[4], flat[5], flat[6]};
    return;
  }
  std::size_t pos = 0;
  for_each_net(std::get<SprNnParams>(p), [&](MlpParams& net) {
    auto take = [&](std::vector<double>& dst) {
      std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), dst.size(), dst.begin());
      pos += dst.size();
    };
    take(net.w0);
    take(net.w1);
    take(net.b0);
    net.b1 = flat[pos++];
  });
}

std::vector<std::string> param_names(const ForceParams& p) {
  if (kind_of(p) == ModelKind::spr) {
    return {"l_pos", "l_neu", "l_neg", "a_pos", "a_neu", "a_neg", "beta"};
  }
  std::vector<std::string> names;
  const char* nets[] = {"g_net", "f_neutral", "f_positive", "f_negative"};
  std::size_t k = 0;
  for_each_net(std::get<SprNnParams>(p), [&](const MlpParams& net) {
    const std::string prefix = nets[k++];
    for (std::size_t h = 0; h < net.hidden; ++h)
      for (std::size_t c = 0; c < net.in; ++c)
        names.push_back(prefix + ".w0[" + std::to_string(h) + "," + std::to_string(c) + "]");
    for (std::size_t h = 0; h < net.hidden; ++h)
      names.push_back(prefix + ".w1[" + std::to_string(h) + "]");
    for (std::size_t h = 0; h < net.hidden; ++h)
      names.push_back(prefix + ".b0[" + std::to_string(h) + "]");
    names.push_back(prefix + ".b1");
  });
  return names;
}

}  // namespace gsn
