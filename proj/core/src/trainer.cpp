#include "gsn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "gsn/evaluation.hpp"
#include "gsn/gradient.hpp"
#include "gsn/gsn_layer.hpp"
#include "gsn/params_io.hpp"
#include "gsn/rng.hpp"

namespace gsn {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kCheckpointFormat = "gsn-checkpoint";
constexpr int kCheckpointVersion = 1;

json hex_array(const std::vector<double>& values) {
  json a = json::array();
  for (double v : values) a.push_back(hex_double(v));
  return a;
}

std::vector<double> parse_hex_array(const json& a) {
  std::vector<double> out;
  for (const auto& v : a) out.push_back(parse_double(v.get<std::string>()));
  return out;
}

std::uint64_t epoch_seed(const TrainConfig& config, std::size_t epoch_index) {
  const std::size_t draw = config.init == InitPolicy::fixed ? 0 : epoch_index;
  return rng::derive(config.seed, rng::tags::epoch, draw);
}

}  // namespace

InitPolicy parse_init_policy(const std::string& name) {
  if (name == "resample_each_epoch") return InitPolicy::resample_each_epoch;
  if (name == "fixed") return InitPolicy::fixed;
  throw std::invalid_argument("unknown init policy '" + name + "'");
}

std::string to_string(InitPolicy p) {
  return p == InitPolicy::fixed ? "fixed" : "resample_each_epoch";
}

void TrainConfig::validate() const {
  if (epochs == 0) throw std::invalid_argument("epochs must be at least 1");
  sim.validate();
  if (!(loss.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(clip_lo < clip_hi)) throw std::invalid_argument("clip bounds must satisfy lo < hi");
  if (!(adam.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must lie in [0, 1)");
  }
}

TrainState initial_train_state(const TrainConfig& config) {
  TrainState s;
  s.params = init_params(config.model, rng::derive(config.seed, rng::tags::params, 0));
  s.adam = AdamState::zeros(param_count(s.params), config.adam);
  return s;
}

TrainingView make_training_view(const SignedGraph& graph, const TrainConfig& config) {
  if (config.validation_fraction <= 0.0) return {graph, {}};
  auto split = hide_signs(graph, {config.validation_fraction, config.seed, false},
                          rng::tags::validate);
  return {std::move(split.graph), std::move(split.hidden)};
}

TrainState train(const SignedGraph& graph, const TrainConfig& config,
                 std::optional<TrainState> resume, const EpochCallback& on_epoch) {
  config.validate();
  TrainState state = resume ? std::move(*resume) : initial_train_state(config);
  if (kind_of(state.params) != config.model) {
    throw std::invalid_argument("resumed parameters do not match the configured model");
  }
  if (state.adam.m.size() != param_count(state.params)) {
    throw std::invalid_argument("optimizer state does not match the parameters");
  }

  const TrainingView view = make_training_view(graph, config);
  const NodeStatics statics = compute_node_statics(view.graph);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t e = state.epoch; e < config.epochs; ++e) {
    const auto start = std::chrono::steady_clock::now();
    SimConfig sim = config.sim;
    sim.seed = epoch_seed(config, e);
    ForceFieldOptions options;
    options.eps = sim.eps;
    options.tie_seed = sim.seed;
    options.features = config.features;
    options.threads = config.threads;
    const ForceField field(view.graph, statics, state.params, options);

    GradResult g;
    try {
      g = grad_through_sim(field, init_state(view.graph.n_nodes(), sim), sim, config.loss);
    } catch (const SimulationError& err) {
      throw TrainingError(e + 1, err.step(), err.detail());
    }

    EpochRecord rec{e + 1, g.loss, nan, nan, 0.0};
    if (!view.validation.empty()) {
      try {
        const MetricsReport r = evaluate(view.graph, view.validation, g.final_x, config.loss.mu);
        rec.auc_l = r.auc_l;
        rec.f1_macro = r.f1_macro;
      } catch (const std::invalid_argument&) {
        // Single-class validation set: metrics stay NaN.
      }
    }

    const auto clipped = clip_gradient(g.grad, config.clip_lo, config.clip_hi);
    auto flat = flatten(state.params);
    adam_step(state.adam, flat, clipped);
    unflatten(state.params, flat);

    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    state.history.push_back(rec);
    state.epoch = e + 1;
    if (on_epoch) on_epoch(state);
  }
  return state;
}

std::string checkpoint_to_json(const TrainState& state, const TrainConfig& config) {
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["epoch"] = state.epoch;
  j["params"] = json::parse(params_to_json({state.params, config.features, config.sim.k}));
  j["adam"] = {{"t", state.adam.t},
               {"lr", hex_double(state.adam.config.lr)},
               {"beta1", hex_double(state.adam.config.beta1)},
               {"beta2", hex_double(state.adam.config.beta2)},
               {"eps", hex_double(state.adam.config.eps)},
               {"m", hex_array(state.adam.m)},
               {"v", hex_array(state.adam.v)}};
  json hist = json::array();
  for (const auto& r : state.history) {
    hist.push_back({{"epoch", r.epoch},
                    {"loss", hex_double(r.loss)},
                    {"auc_l", hex_double(r.auc_l)},
                    {"f1_macro", hex_double(r.f1_macro)},
                    {"wall_ms", r.wall_ms}});
  }
  j["history"] = std::move(hist);
  return j.dump(2) + "\n";
}

TrainState checkpoint_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("format").get<std::string>() != kCheckpointFormat) {
    throw std::runtime_error("not a checkpoint file");
  }
  if (j.at("version").get<int>() != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version");
  }
  TrainState s;
  s.epoch = j.at("epoch").get<std::size_t>();
  s.params = params_from_json(j.at("params").dump()).params;
  const json& a = j.at("adam");
  s.adam.t = a.at("t").get<std::uint64_t>();
  s.adam.config.lr = parse_double(a.at("lr").get<std::string>());
  s.adam.config.beta1 = parse_double(a.at("beta1").get<std::string>());
  s.adam.config.beta2 = parse_double(a.at("beta2").get<std::string>());
  s.adam.config.eps = parse_double(a.at("eps").get<std::string>());
  s.adam.m = parse_hex_array(a.at("m"));
  s.adam.v = parse_hex_array(a.at("v"));
  for (const auto& r : j.at("history")) {
    s.history.push_back({r.at("epoch").get<std::size_t>(),
                         parse_double(r.at("loss").get<std::string>()),
                         parse_double(r.at("auc_l").get<std::string>()),
                         parse_double(r.at("f1_macro").get<std::string>()),
                         r.at("wall_ms").get<double>()});
  }
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const TrainState& state,
                     const TrainConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << checkpoint_to_json(state, config);
}

TrainState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "epoch,loss,auc_l,f1_macro,wall_ms\n";
  char buf[160];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.3f\n", r.epoch, r.loss, r.auc_l,
                  r.f1_macro, r.wall_ms);
    out << buf;
  }
}

}  // namespace gsn
