#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "digest.hpp"
#include "gsn/embedding_io.hpp"
#include "gsn/evaluation.hpp"
#include "gsn/gsn_layer.hpp"
#include "gsn/params_io.hpp"
#include "gsn/rng.hpp"
#include "gsn/trainer.hpp"

#ifndef GSN_VERSION
#define GSN_VERSION "0.0.0"
#endif

namespace gsn::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Small file helpers

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Writes next to the target and renames, so an interrupted run never leaves
// a truncated checkpoint behind.
void replace_file(const fs::path& path, const std::function<void(const fs::path&)>& writer) {
  fs::path tmp = path;
  tmp += ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Configuration checks. Anything wrong with the request itself is a usage
// error; failures while doing the work are runtime errors.

template <class F>
auto usage_checked(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

SimConfig sim_config(const RunConfig& c, std::uint64_t seed) {
  SimConfig s;
  s.k = c.k;
  s.dt = c.dt;
  s.damping = c.damping;
  s.n_steps = c.n_steps;
  s.seed = seed;
  s.eps = c.eps;
  s.integrator = c.semi_implicit ? Integrator::semi_implicit : Integrator::explicit_euler;
  return s;
}

std::size_t effective_threads(const RunConfig& c) { return c.deterministic ? 1 : std::max<std::size_t>(1, c.threads); }

TrainConfig train_config(const RunConfig& c) {
  return usage_checked([&] {
    TrainConfig t;
    t.model = parse_model_kind(c.model);
    t.epochs = c.epochs;
    t.sim = sim_config(c, c.seed);
    t.loss.mu = c.mu;
    t.loss.domain = parse_loss_domain(c.loss_domain);
    t.loss.target = parse_target_encoding(c.target);
    t.adam.lr = c.lr;
    t.clip_lo = -c.clip;
    t.clip_hi = c.clip;
    t.seed = c.seed;
    t.init = parse_init_policy(c.init_policy);
    t.validation_fraction = c.validation_fraction;
    t.features.raw_degree = c.raw_degree_features;
    t.threads = effective_threads(c);
    t.validate();
    return t;
  });
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void validate(const RunConfig& c) {
  static const std::set<std::string> commands{"ingest", "split", "train", "embed", "eval", "bench"};
  require(commands.count(c.command) > 0, "unknown command '" + c.command + "'");
  usage_checked([&] { return parse_edge_format(c.format); });
  require(c.p_hidden >= 0.0 && c.p_hidden <= 1.0, "--p-hidden must lie in [0, 1]");
  usage_checked([&] {
    sim_config(c, 0).validate();
    return 0;
  });
  require(c.mu > 0.0, "--mu must be positive");
  if (c.command != "bench") require(!c.input.empty(), "--input is required");
  if (c.command == "train") train_config(c);
  if (c.command == "embed") require(!c.params.empty(), "embed needs --params");
  if (c.command == "eval") {
    require(!c.params.empty() || !c.embeddings.empty(), "eval needs --embeddings or --params");
    require(c.repeats >= 1, "--repeats must be at least 1");
    require(c.repeats == 1 || !c.params.empty(), "--repeats above 1 needs --params");
  }
  if (c.command == "bench") {
    require(!c.bench_nodes.empty() && !c.bench_edges.empty() && !c.bench_k.empty(),
            "benchmark grid lists must be non-empty");
    require(c.bench_runs >= 1, "--bench-runs must be at least 1");
  }
}

// ---------------------------------------------------------------------------
// Manifest

std::vector<std::string> input_files(const RunConfig& c) {
  std::vector<std::string> files;
  for (const auto* p : {&c.input, &c.hidden_edges, &c.params, &c.embeddings, &c.resume}) {
    if (!p->empty()) files.push_back(*p);
  }
  return files;
}

json make_manifest(const RunConfig& c, const std::vector<std::string>& artifacts) {
  json m;
  m["tool"] = "gsn";
  m["version"] = GSN_VERSION;
  m["command"] = c.command;
  m["config"] = to_json(c);
  m["config_hash"] = config_hash(c);
  json inputs = json::array();
  for (const auto& f : input_files(c)) inputs.push_back({{"path", f}, {"sha256", sha256_file(f)}});
  m["inputs"] = inputs;
  m["seeds"] = {{"seed", c.seed},
                {"split_seed", c.split_seed},
                {"param_seed", rng::derive(c.seed, rng::tags::params, 0)}};
  m["artifacts"] = artifacts;
  return m;
}

void write_manifest(const RunConfig& c, const std::vector<std::string>& artifacts) {
  write_text(fs::path(c.out) / "manifest.json", make_manifest(c, artifacts).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Graph loading and hidden sets

SignedGraph load_graph(const RunConfig& c) {
  const auto format = parse_edge_format(c.format);
  return to_undirected(load_edge_list(c.input, format));
}

std::string hidden_to_text(const SignedGraph& g, const std::vector<std::size_t>& hidden) {
  std::string text;
  for (auto e : hidden) {
    const auto& edge = g.edge(e);
    text += g.label(edge.u) + " " + g.label(edge.v) + " " + std::to_string(to_int(edge.true_sign)) + "\n";
  }
  return text;
}

// Reads "u v [sign]" lines of raw labels and returns the matching edge ids.
std::vector<std::size_t> read_hidden(const fs::path& path, const SignedGraph& g) {
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    const auto& edge = g.edge(e);
    index[{g.label(edge.u), g.label(edge.v)}] = e;
    index[{g.label(edge.v), g.label(edge.u)}] = e;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::set<std::size_t> picked;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (a[0] == '#') continue;
    if (!(ls >> b)) throw ParseError(line_no, "expected 'u v [sign]'");
    const auto it = index.find({a, b});
    if (it == index.end()) throw ParseError(line_no, "edge " + a + " " + b + " is not in the graph");
    picked.insert(it->second);
  }
  return {picked.begin(), picked.end()};
}

// The test split requested by the configuration: an explicit hidden-edge
// file wins, then edges already hidden in the input, then a fresh split.
HiddenSplit test_split(const SignedGraph& g, const RunConfig& c, std::uint64_t split_seed) {
  if (!c.hidden_edges.empty()) {
    auto hidden = read_hidden(c.hidden_edges, g);
    std::vector<Sign> observed;
    for (const auto& e : g.edges()) observed.push_back(e.observed_sign);
    for (auto e : hidden) observed[e] = Sign::neutral;
    return {g.with_observed(observed), std::move(hidden)};
  }
  auto already = hidden_edges(g);
  if (!already.empty()) return {g, std::move(already)};
  return hide_signs(g, {c.p_hidden, split_seed, c.exact_split});
}

json graph_stats(const SignedGraph& g) {
  const auto statics = compute_node_statics(g);
  const double m = static_cast<double>(g.n_edges());
  return {{"nodes", g.n_nodes()},
          {"edges", g.n_edges()},
          {"positive_fraction", m > 0 ? double(g.count_true(Sign::positive)) / m : 0.0},
          {"hidden_edges", g.count_observed(Sign::neutral)},
          {"degree_p80", statics.p80}};
}

// ---------------------------------------------------------------------------
// Simulation helpers

struct Embedding {
  Matrix x;
  double solver_ms = 0.0;
};

Embedding embed_graph(const SignedGraph& g, const ParamFile& pf, const RunConfig& c, std::uint64_t seed) {
  const auto statics = compute_node_statics(g);
  ForceFieldOptions opt;
  opt.eps = c.eps;
  opt.tie_seed = seed;
  opt.features = pf.features;
  opt.threads = effective_threads(c);
  const ForceField field(g, statics, pf.params, opt);
  const SimConfig sim = sim_config(c, seed);
  const auto t0 = std::chrono::steady_clock::now();
  SimState state = simulate(init_state(g.n_nodes(), sim), field, sim);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(state.x), std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

ParamFile load_compatible_params(const RunConfig& c) {
  ParamFile pf = load_params(c.params);
  if (pf.trained_k != 0 && pf.trained_k != c.k) {
    throw UsageError("parameters were trained with k=" + std::to_string(pf.trained_k) +
                     " but k=" + std::to_string(c.k) + " was requested");
  }
  if (pf.features.raw_degree != c.raw_degree_features) {
    throw UsageError("parameters were trained with raw_degree_features=" +
                     std::string(pf.features.raw_degree ? "true" : "false"));
  }
  return pf;
}

MetricsReport score(const SignedGraph& g, const std::vector<std::size_t>& hidden, const Matrix& x,
                    const RunConfig& c, std::uint64_t seed) {
  const auto preds = c.calibrate ? predict(g, hidden, x, fit_calibration(g, x)) : predict(g, hidden, x, c.mu);
  MetricsReport r = evaluate(preds);
  r.seed = seed;
  r.config_hash = config_hash(c);
  return r;
}

void write_report(const fs::path& dir, const std::string& stem, const MetricsReport& r) {
  write_text(dir / (stem + ".json"), report_to_json(r));
  write_text(dir / (stem + ".txt"), report_to_text(r));
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_ingest(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  write_manifest(c, {"graph.txt", "stats.json"});
  const auto staged = load_edge_list(c.input, parse_edge_format(c.format));
  const auto g = to_undirected(staged);
  write_dump(dir / "graph.txt", g);
  json stats = {{"staged_edges", staged.edges.size()},
                {"staged_nodes", staged.n_nodes()},
                {"staged_positive_fraction", staged.positive_fraction()}};
  stats["undirected"] = graph_stats(g);
  write_text(dir / "stats.json", stats.dump(2) + "\n");
  out << "staged: " << staged.edges.size() << " edges, " << staged.n_nodes() << " nodes, positive "
      << staged.positive_fraction() << "\n";
  out << "undirected: " << g.n_edges() << " edges\n";
}

void cmd_split(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  write_manifest(c, {"split.txt", "hidden.txt", "stats.json"});
  const auto g = load_graph(c);
  const auto split = test_split(g, c, c.split_seed);
  write_dump(dir / "split.txt", split.graph);
  write_text(dir / "hidden.txt", hidden_to_text(split.graph, split.hidden));
  write_text(dir / "stats.json", graph_stats(split.graph).dump(2) + "\n");
  out << "hidden " << split.hidden.size() << " of " << g.n_edges() << " edges\n";
}

void cmd_train(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const TrainConfig tc = train_config(c);
  write_manifest(c, {"params.json", "history.csv", "checkpoint.json", "report.json", "report.txt"});

  const auto g = load_graph(c);
  const auto split = test_split(g, c, c.split_seed);

  std::optional<TrainState> resume;
  if (!c.resume.empty()) resume = load_checkpoint(c.resume);

  const auto on_epoch = [&](const TrainState& s) {
    replace_file(dir / "checkpoint.json", [&](const fs::path& p) { save_checkpoint(p, s, tc); });
    const auto& h = s.history.back();
    char line[160];
    std::snprintf(line, sizeof line, "epoch %zu/%zu loss=%.6g auc_l=%.4f f1_macro=%.4f\n", h.epoch,
                  tc.epochs, h.loss, h.auc_l, h.f1_macro);
    out << line << std::flush;
  };
  const TrainState final = train(split.graph, tc, std::move(resume), on_epoch);
  replace_file(dir / "checkpoint.json", [&](const fs::path& p) { save_checkpoint(p, final, tc); });

  ParamFile pf{final.params, tc.features, c.k};
  save_params(dir / "params.json", pf);
  write_history_csv(dir / "history.csv", final.history);

  // Held-out score of the trained parameters on the test edges.
  const std::uint64_t eval_seed = rng::derive(c.seed, rng::tags::repeat, 0);
  const auto emb = embed_graph(split.graph, pf, c, eval_seed);
  try {
    const auto report = score(split.graph, split.hidden, emb.x, c, eval_seed);
    write_report(dir, "report", report);
    out << report_to_text(report);
  } catch (const std::invalid_argument& e) {
    out << "no test report: " << e.what() << "\n";
  }
}

void cmd_embed(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const std::string emb_name = c.binary ? "embeddings.bin" : "embeddings.txt";
  const ParamFile pf = load_compatible_params(c);
  write_manifest(c, {emb_name, "hidden.txt", "timing.json"});

  const auto g = load_graph(c);
  const auto split = test_split(g, c, c.split_seed);
  const auto emb = embed_graph(split.graph, pf, c, c.seed);

  if (c.binary) {
    write_embeddings_binary(dir / emb_name, emb.x);
  } else {
    write_embeddings_text(dir / emb_name, emb.x);
  }
  write_text(dir / "hidden.txt", hidden_to_text(split.graph, split.hidden));
  const json timing = {{"embedding_ms", emb.solver_ms},
                       {"n_nodes", split.graph.n_nodes()},
                       {"n_edges", split.graph.n_edges()},
                       {"k", c.k},
                       {"n_steps", c.n_steps}};
  write_text(dir / "timing.json", timing.dump(2) + "\n");
  out << "embedded " << split.graph.n_nodes() << " nodes in " << emb.solver_ms << " ms\n";
}

void cmd_eval(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  if (!c.embeddings.empty()) {
    write_manifest(c, {"report.json", "report.txt"});
    const auto g = load_graph(c);
    const auto split = test_split(g, c, c.split_seed);
    const Matrix x = read_embeddings(c.embeddings);
    if (x.rows() != split.graph.n_nodes()) {
      throw std::runtime_error("embeddings have " + std::to_string(x.rows()) + " rows but the graph has " +
                               std::to_string(split.graph.n_nodes()) + " nodes");
    }
    const auto report = score(split.graph, split.hidden, x, c, c.seed);
    write_report(dir, "report", report);
    out << report_to_text(report);
    return;
  }

  const ParamFile pf = load_compatible_params(c);
  std::vector<std::string> artifacts;
  if (c.repeats == 1) {
    artifacts = {"report.json", "report.txt"};
  } else {
    for (std::size_t r = 0; r < c.repeats; ++r) artifacts.push_back("report_" + std::to_string(r) + ".json");
    artifacts.insert(artifacts.end(), {"aggregate.json", "aggregate.txt"});
  }
  write_manifest(c, artifacts);

  const auto g = load_graph(c);
  if (c.repeats == 1) {
    const auto split = test_split(g, c, c.split_seed);
    const auto emb = embed_graph(split.graph, pf, c, c.seed);
    const auto report = score(split.graph, split.hidden, emb.x, c, c.seed);
    write_report(dir, "report", report);
    out << report_to_text(report);
    return;
  }

  // Multi-seed: run r uses derive(seed, "repeat", r) for both the split and
  // the initial positions.
  std::vector<MetricsReport> reports;
  for (std::size_t r = 0; r < c.repeats; ++r) {
    const std::uint64_t s = rng::derive(c.seed, rng::tags::repeat, r);
    const auto split = test_split(g, c, s);
    const auto emb = embed_graph(split.graph, pf, c, s);
    reports.push_back(score(split.graph, split.hidden, emb.x, c, s));
    write_report(dir, "report_" + std::to_string(r), reports.back());
    out << "run " << r << "\n" << report_to_text(reports.back());
  }
  const auto agg = aggregate(reports);
  write_text(dir / "aggregate.json", aggregate_to_json(agg));
  write_text(dir / "aggregate.txt", aggregate_to_text(agg));
  out << aggregate_to_text(agg);
}

void cmd_bench(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  write_manifest(c, {"bench.csv", "bench_summary.json"});
  RunConfig rc = c;
  rc.threads = effective_threads(c);
  const auto rows = run_bench_grid(rc);
  const auto csv = bench_csv(rows);
  write_text(dir / "bench.csv", csv);
  write_text(dir / "bench_summary.json", bench_summary(rows).dump(2) + "\n");
  out << csv;
}

// ---------------------------------------------------------------------------
// Command-line parsing

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct OptionSpec {
  const char* key;
  const char* help;
};

const std::vector<OptionSpec>& data_options() {
  static const std::vector<OptionSpec> v{
      {"input", "edge list to read"},
      {"format", "plain, rating_csv or dump"},
      {"p_hidden", "probability of hiding an edge sign"},
      {"split_seed", "seed of the hidden split"},
      {"exact_split", "hide exactly ceil(p * M) edges"},
      {"hidden_edges", "file of 'u v' pairs to hide instead of a random split"},
  };
  return v;
}

const std::vector<OptionSpec>& sim_options() {
  static const std::vector<OptionSpec> v{
      {"k", "embedding dimension"},
      {"dt", "time step"},
      {"damping", "velocity damping per step"},
      {"n_steps", "integration steps"},
      {"semi_implicit", "update velocity before position"},
      {"raw_degree_features", "feed raw degrees to the networks"},
      {"eps", "distance floor for force directions"},
  };
  return v;
}

const std::vector<OptionSpec>& train_options() {
  static const std::vector<OptionSpec> v{
      {"model", "spr or spr-nn"},
      {"epochs", "training epochs"},
      {"lr", "Adam learning rate"},
      {"mu", "decision threshold distance"},
      {"clip", "gradient clip bound"},
      {"loss_domain", "visible_only or all_edges_oracle"},
      {"target", "sign or zero_one"},
      {"init_policy", "resample_each_epoch or fixed"},
      {"validation_fraction", "share of visible edges held out for history metrics"},
      {"resume", "checkpoint to continue from"},
  };
  return v;
}

const std::vector<OptionSpec>& embed_options() {
  static const std::vector<OptionSpec> v{
      {"params", "trained parameter file"},
      {"binary", "write binary embeddings"},
  };
  return v;
}

const std::vector<OptionSpec>& eval_options() {
  static const std::vector<OptionSpec> v{
      {"params", "trained parameter file (embeds before scoring)"},
      {"embeddings", "embedding file to score"},
      {"repeats", "number of seeded runs to aggregate"},
      {"calibrate", "fit the logistic map on visible edges"},
      {"mu", "decision threshold distance"},
  };
  return v;
}

const std::vector<OptionSpec>& bench_options() {
  static const std::vector<OptionSpec> v{
      {"bench_nodes", "comma separated node counts"},
      {"bench_edges", "comma separated edge counts"},
      {"bench_k", "comma separated dimensions"},
      {"bench_runs", "timed runs per cell"},
      {"bench_sim_steps", "steps per timed simulation"},
  };
  return v;
}

void add_options(CLI::App* app, const std::vector<OptionSpec>& specs, std::map<std::string, std::string>& given) {
  static const json defaults = to_json(RunConfig{});
  for (const auto& spec : specs) {
    const std::string key = spec.key;
    const json& def = defaults.at(key);
    std::string help = spec.help;
    if (def.is_boolean()) {
      app->add_flag_callback(dashed(key), [&given, key] { given[key] = "true"; }, help);
    } else {
      const std::string shown = def.is_string() ? def.get<std::string>() : def.dump();
      if (!shown.empty()) help += " (default " + shown + ")";
      const char* type = def.is_array()             ? "LIST"
                         : def.is_number_float()    ? "NUM"
                         : def.is_number()          ? "INT"
                                                    : "STR";
      app->add_option_function<std::string>(
             dashed(key), [&given, key](const std::string& v) { given[key] = v; }, help)
          ->type_name(type);
    }
  }
}

RunConfig resolve(const std::string& command, const std::string& config_path, const std::string& manifest_path,
                  const std::map<std::string, std::string>& given) {
  RunConfig cfg;
  if (!manifest_path.empty()) {
    json manifest;
    try {
      manifest = json::parse(read_text(manifest_path));
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("bad manifest: ") + e.what());
    }
    if (!manifest.contains("config")) throw UsageError("manifest has no config");
    cfg = from_json(manifest.at("config"));
    // The inputs must be the same bytes the manifest was written for.
    for (const auto& in : manifest.value("inputs", json::array())) {
      const auto path = in.at("path").get<std::string>();
      if (sha256_file(path) != in.at("sha256").get<std::string>()) {
        throw std::runtime_error("input " + path + " does not match the manifest digest");
      }
    }
  }
  if (!config_path.empty()) {
    json file;
    try {
      file = json::parse(read_text(config_path));
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("bad config file: ") + e.what());
    }
    cfg = overlay(cfg, file);
  }
  json patch = json::object();
  for (const auto& [key, text] : given) patch[key] = coerce(key, text);
  cfg = overlay(cfg, patch);
  if (!command.empty()) cfg.command = command;
  if (cfg.command.empty()) throw UsageError("no command given");
  return cfg;
}

}  // namespace

void execute(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  fs::create_directories(cfg.out);
  if (cfg.command == "ingest") return cmd_ingest(cfg, out);
  if (cfg.command == "split") return cmd_split(cfg, out);
  if (cfg.command == "train") return cmd_train(cfg, out);
  if (cfg.command == "embed") return cmd_embed(cfg, out);
  if (cfg.command == "eval") return cmd_eval(cfg, out);
  cmd_bench(cfg, out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gsn: signed graph embeddings from a learnable spring system"};
  app.set_version_flag("--version", GSN_VERSION);
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::map<std::string, std::string> given;
  std::string config_path;
  std::string manifest_path;
  add_options(&app,
              {{"seed", "master seed"},
               {"threads", "worker cap"},
               {"deterministic", "serial execution with fixed reduction order"},
               {"out", "output directory"}},
              given);
  app.add_option("--config", config_path, "JSON configuration file")->type_name("PATH");
  app.add_option("--from-manifest", manifest_path, "rerun the configuration stored in a manifest")
      ->type_name("PATH");

  auto* ingest = app.add_subcommand("ingest", "load an edge list and write the canonical dump");
  add_options(ingest, {{"input", "edge list to read"}, {"format", "plain, rating_csv or dump"}}, given);

  auto* split = app.add_subcommand("split", "hide edge signs");
  add_options(split, data_options(), given);

  auto* train = app.add_subcommand("train", "train force parameters");
  add_options(train, data_options(), given);
  add_options(train, sim_options(), given);
  add_options(train, train_options(), given);

  auto* embed = app.add_subcommand("embed", "simulate with trained parameters");
  add_options(embed, data_options(), given);
  add_options(embed, sim_options(), given);
  add_options(embed, embed_options(), given);

  auto* eval = app.add_subcommand("eval", "score link-sign prediction on hidden edges");
  add_options(eval, data_options(), given);
  add_options(eval, sim_options(), given);
  add_options(eval, eval_options(), given);

  auto* bench = app.add_subcommand("bench", "time the force field and the solver on synthetic graphs");
  add_options(bench, bench_options(), given);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << GSN_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gsn: " << e.what() << "\n";
    return kExitUsage;
  }

  std::string command;
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
  if (command.empty() && manifest_path.empty()) {
    err << app.help();
    return kExitUsage;
  }

  try {
    execute(resolve(command, config_path, manifest_path, given), out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "gsn: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gsn: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace gsn::cli
