#include "config.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

#include "digest.hpp"

namespace gsn::cli {

#define GSN_CONFIG_FIELDS(X)                                                                    \
  X(command) X(input) X(format) X(p_hidden) X(split_seed) X(exact_split) X(hidden_edges)        \
  X(model) X(k) X(dt) X(damping) X(n_steps) X(semi_implicit) X(raw_degree_features) X(eps)      \
  X(epochs) X(lr) X(mu) X(clip) X(loss_domain) X(target) X(init_policy) X(validation_fraction)  \
  X(resume) X(params) X(embeddings) X(binary) X(repeats) X(calibrate) X(bench_nodes)            \
  X(bench_edges) X(bench_k) X(bench_runs) X(bench_sim_steps) X(seed) X(threads)                 \
  X(deterministic) X(out)

json to_json(const RunConfig& c) {
  json j;
#define GSN_PUT(name) j[#name] = c.name;
  GSN_CONFIG_FIELDS(GSN_PUT)
#undef GSN_PUT
  return j;
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  const json defaults = to_json(RunConfig{});
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!defaults.contains(it.key())) throw UsageError("unknown configuration key '" + it.key() + "'");
  }
  RunConfig c;
  try {
#define GSN_GET(name) \
  if (j.contains(#name)) j.at(#name).get_to(c.name);
    GSN_CONFIG_FIELDS(GSN_GET)
#undef GSN_GET
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

RunConfig overlay(const RunConfig& base, const json& patch) {
  if (!patch.is_object()) throw UsageError("configuration must be a JSON object");
  json j = to_json(base);
  for (auto it = patch.begin(); it != patch.end(); ++it) j[it.key()] = it.value();
  return from_json(j);
}

namespace {

json parse_scalar(const json& like, const std::string& text) {
  if (like.is_boolean()) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw UsageError("expected true or false, got '" + text + "'");
  }
  if (like.is_string()) return text;
  std::size_t used = 0;
  try {
    if (like.is_number_unsigned() || like.is_number_integer()) {
      if (!text.empty() && text[0] == '-') throw UsageError("expected a non-negative integer");
      const auto v = std::stoull(text, &used);
      if (used == text.size()) return v;
    } else {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::logic_error&) {
  }
  throw UsageError("cannot parse '" + text + "' as a number");
}

}  // namespace

json coerce(const std::string& key, const std::string& text) {
  const json defaults = to_json(RunConfig{});
  if (!defaults.contains(key)) throw UsageError("unknown option " + key);
  const json& like = defaults.at(key);
  if (!like.is_array()) return parse_scalar(like, text);
  // Lists are comma separated.
  json arr = json::array();
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    arr.push_back(parse_scalar(like.at(0), piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return arr;
}

bool is_execution_key(const std::string& key) {
  static const std::set<std::string> keys{"out", "threads", "deterministic"};
  return keys.count(key) > 0;
}

bool is_path_key(const std::string& key) {
  static const std::set<std::string> keys{"input", "hidden_edges", "params", "embeddings", "resume"};
  return keys.count(key) > 0;
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  json canonical;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (is_execution_key(it.key())) continue;
    const auto& v = it.value();
    // Files enter by content so the same data under another name hashes alike.
    if (is_path_key(it.key()) && !v.get<std::string>().empty() && std::filesystem::is_regular_file(v.get<std::string>())) {
      canonical[it.key()] = "sha256:" + sha256_file(v.get<std::string>());
    } else {
      canonical[it.key()] = v;
    }
  }
  return sha256_hex(canonical.dump()).substr(0, 16);
}

}  // namespace gsn::cli
