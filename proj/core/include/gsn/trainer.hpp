#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsn/adam.hpp"
#include "gsn/force_model.hpp"
#include "gsn/loss.hpp"
#include "gsn/signed_graph.hpp"
#include "gsn/simulator.hpp"

namespace gsn {

enum class InitPolicy {
  resample_each_epoch,  // X(0) drawn from derive(seed, "epoch", epoch)
  fixed,                // the epoch-0 draw reused every epoch
};

InitPolicy parse_init_policy(const std::string& name);
std::string to_string(InitPolicy p);

struct TrainConfig {
  ModelKind model = ModelKind::spr_nn;
  std::size_t epochs = 200;
  SimConfig sim;  // sim.seed is ignored; per-epoch seeds derive from `seed`
  LossConfig loss;
  AdamConfig adam;
  double clip_lo = -1.0;
  double clip_hi = 1.0;
  std::uint64_t seed = 0;
  InitPolicy init = InitPolicy::resample_each_epoch;
  /// Fraction of visible edges re-hidden for the history metrics. They are
  /// excluded from the loss and exert the neutral force during training.
  double validation_fraction = 0.1;
  FeatureOptions features;
  std::size_t threads = 1;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // loss of the parameters before this epoch's update
  double auc_l = 0.0;     // validation metrics of the same forward pass
  double f1_macro = 0.0;  // (NaN without a usable validation set)
  double wall_ms = 0.0;
};

struct TrainState {
  ForceParams params;
  AdamState adam;
  std::size_t epoch = 0;  // completed epochs
  std::vector<EpochRecord> history;
};

/// Fresh state: parameters from init_params(model, derive(seed, "param", 0))
/// and zero Adam moments.
TrainState initial_train_state(const TrainConfig& config);

/// The graph as seen during training: validation edges hidden.
struct TrainingView {
  SignedGraph graph;
  std::vector<std::size_t> validation;
};

TrainingView make_training_view(const SignedGraph& graph, const TrainConfig& config);

class TrainingError : public std::runtime_error {
 public:
  TrainingError(std::size_t epoch, std::size_t step, const std::string& what)
      : std::runtime_error("epoch " + std::to_string(epoch) + ", step " + std::to_string(step) +
                           ": " + what),
        epoch_(epoch),
        step_(step) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t epoch_;
  std::size_t step_;
};

using EpochCallback = std::function<void(const TrainState&)>;

/// Runs epochs state.epoch+1 .. config.epochs on `graph` (whose test edges
/// are already hidden). Each epoch: draw X(0), simulate, backpropagate,
/// clip, one Adam step. Divergence is reported as a TrainingError naming
/// the epoch and step.
TrainState train(const SignedGraph& graph, const TrainConfig& config,
                 std::optional<TrainState> resume = std::nullopt,
                 const EpochCallback& on_epoch = {});

/// Versioned JSON: parameters (parameter file format), Adam state, epoch
/// counter and history. Floats are hex-encoded so resuming is bitwise exact.
std::string checkpoint_to_json(const TrainState& state, const TrainConfig& config);
TrainState checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const TrainState& state,
                     const TrainConfig& config);
TrainState load_checkpoint(const std::filesystem::path& path);

/// Header "epoch,loss,auc_l,f1_macro,wall_ms".
void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history);

}  // namespace gsn
