#pragma once

// Resolved run configuration for the gsn tool. Precedence: command-line flags
// over the --config JSON file over the built-in defaults.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gsn::cli {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;

  // Data
  std::string input;
  std::string format = "plain";
  double p_hidden = 0.2;
  std::uint64_t split_seed = 0;
  bool exact_split = false;
  std::string hidden_edges;

  // Model and simulation
  std::string model = "spr-nn";
  std::size_t k = 64;
  double dt = 0.005;
  double damping = 0.05;
  std::size_t n_steps = 120;
  bool semi_implicit = false;
  bool raw_degree_features = false;
  double eps = 1e-9;

  // Training
  std::size_t epochs = 200;
  double lr = 0.03;
  double mu = 2.5;
  double clip = 1.0;
  std::string loss_domain = "visible_only";
  std::string target = "sign";
  std::string init_policy = "resample_each_epoch";
  double validation_fraction = 0.1;
  std::string resume;

  // Embedding and evaluation
  std::string params;
  std::string embeddings;
  bool binary = false;
  std::size_t repeats = 1;
  bool calibrate = false;

  // Benchmark grid
  std::vector<std::size_t> bench_nodes{5000};
  std::vector<std::size_t> bench_edges{25000, 50000};
  std::vector<std::size_t> bench_k{32, 64};
  std::size_t bench_runs = 7;
  std::size_t bench_sim_steps = 10;

  // Run control
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool deterministic = false;
  std::string out = ".";
};

json to_json(const RunConfig& c);
/// Strict: unknown keys and type mismatches throw UsageError.
RunConfig from_json(const json& j);

/// Applies a JSON object on top of a configuration.
RunConfig overlay(const RunConfig& base, const json& patch);

/// Parses a command-line string into the JSON type of `key`'s default.
json coerce(const std::string& key, const std::string& text);

/// Keys that describe where and how fast a run executes but not what it
/// computes; excluded from the config hash.
bool is_execution_key(const std::string& key);

/// Keys naming input files.
bool is_path_key(const std::string& key);

/// First 16 hex digits of SHA-256 over the canonical JSON of the
/// computation-defining keys, with input files replaced by their digests.
std::string config_hash(const RunConfig& c);

}  // namespace gsn::cli
