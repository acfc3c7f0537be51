#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "gsn/embedding_io.hpp"
#include "gsn/evaluation.hpp"
#include "gsn/simulator.hpp"

namespace fs = std::filesystem;
using gsn::cli::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result gsn_run(std::vector<std::string> args) {
  args.insert(args.begin(), "gsn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gsn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A scratch directory holding one small plain edge list.
struct Workspace {
  fs::path root;
  std::string graph;

  Workspace() {
    std::random_device rd;
    root = fs::temp_directory_path() / ("gsn-cli-" + std::to_string(rd()));
    fs::create_directories(root);
    graph = (root / "g.txt").string();
    const auto g = fixture::random_graph({30, 90, 0.3, 0.0, 11});
    std::ofstream out(graph);
    for (const auto& e : g.edges()) out << e.u << " " << e.v << " " << gsn::to_int(e.true_sign) << "\n";
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  std::string dir(const std::string& name) const { return (root / name).string(); }
};

const std::vector<std::string> kSmallTrain{"--k", "4", "--n-steps", "6", "--epochs", "3"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(gsn_run({"train"}).code == 2);
    CHECK(gsn_run({"train", "--input", "x", "--no-such-flag"}).code == 2);
    CHECK(gsn_run({"train", "--input", "x", "--k", "abc"}).code == 2);
    CHECK(gsn_run({"train", "--input", "x", "--model", "gcn"}).code == 2);
    CHECK(gsn_run({"train", "--input", "x", "--dt", "-1"}).code == 2);
    CHECK(gsn_run({"eval", "--input", "x"}).code == 2);
    CHECK(gsn_run({}).code == 2);
    const auto r = gsn_run({"train"});
    CHECK(r.err.find("--input") != std::string::npos);
  }

  TEST_CASE("help and version exit with 0") {
    CHECK(gsn_run({"--help"}).code == 0);
    CHECK(gsn_run({"--version"}).code == 0);
  }

  TEST_CASE("runtime failures exit with 1") {
    Workspace ws;
    const auto r = gsn_run({"ingest", "--input", ws.dir("missing.txt"), "--out", ws.dir("o")});
    CHECK(r.code == 1);
    CHECK(!r.err.empty());
  }

  TEST_CASE("built-in defaults") {
    const json d = gsn::cli::to_json(gsn::cli::RunConfig{});
    CHECK(d["k"] == 64);
    CHECK(d["dt"] == 0.005);
    CHECK(d["damping"] == 0.05);
    CHECK(d["mu"] == 2.5);
    CHECK(d["lr"] == 0.03);
    CHECK(d["epochs"] == 200);
    CHECK(d["n_steps"] == 120);
    CHECK(d["p_hidden"] == 0.2);
    CHECK(d["model"] == "spr-nn");
  }

  TEST_CASE("train writes its artifacts and echoes defaults in the manifest") {
    Workspace ws;
    const auto out = ws.dir("run1");
    const auto r = gsn_run(concat({"train", "--model", "spr-nn", "--input", ws.graph, "--seed", "1", "--out", out},
                                  kSmallTrain));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const char* f : {"params.json", "history.csv", "manifest.json", "checkpoint.json", "report.json"}) {
      CHECK_MESSAGE(fs::exists(fs::path(out) / f), f);
    }
    const json m = read_json(fs::path(out) / "manifest.json");
    CHECK(m["config"]["lr"] == 0.03);
    CHECK(m["config"]["dt"] == 0.005);
    CHECK(m["config"]["damping"] == 0.05);
    CHECK(m["config"]["mu"] == 2.5);
    CHECK(m["config"]["p_hidden"] == 0.2);
    CHECK(m["config"]["k"] == 4);
    CHECK(m["inputs"].size() == 1);
    CHECK(m["inputs"][0]["sha256"].get<std::string>().size() == 64);
    const auto history = slurp(fs::path(out) / "history.csv");
    CHECK(history.rfind("epoch,loss,auc_l,f1_macro,wall_ms\n", 0) == 0);
    CHECK(std::count(history.begin(), history.end(), '\n') == 4);
  }

  TEST_CASE("flags override the config file which overrides defaults") {
    Workspace ws;
    const auto cfg = ws.dir("cfg.json");
    std::ofstream(cfg) << R"({"k": 6, "dt": 0.01, "epochs": 1, "n_steps": 3})";
    const auto out = ws.dir("run");
    const auto r = gsn_run({"train", "--config", cfg, "--input", ws.graph, "--k", "5", "--out", out});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const json c = read_json(fs::path(out) / "manifest.json")["config"];
    CHECK(c["k"] == 5);
    CHECK(c["dt"] == 0.01);
    CHECK(c["lr"] == 0.03);
  }

  TEST_CASE("unknown config keys are rejected") {
    Workspace ws;
    const auto cfg = ws.dir("cfg.json");
    std::ofstream(cfg) << R"({"learning_rate": 0.1})";
    CHECK(gsn_run({"train", "--config", cfg, "--input", ws.graph, "--out", ws.dir("o")}).code == 2);
  }

  TEST_CASE("config hash ignores execution settings") {
    gsn::cli::RunConfig a;
    a.command = "train";
    auto b = a;
    b.out = "elsewhere";
    b.threads = 8;
    b.deterministic = true;
    CHECK(gsn::cli::config_hash(a) == gsn::cli::config_hash(b));
    b.seed = 3;
    CHECK(gsn::cli::config_hash(a) != gsn::cli::config_hash(b));
  }

  TEST_CASE("list options parse comma separated values") {
    CHECK(gsn::cli::coerce("bench_k", "8,16,32") == json::array({8, 16, 32}));
    CHECK_THROWS_AS(gsn::cli::coerce("bench_k", "8,x"), gsn::cli::UsageError);
    CHECK(gsn::cli::coerce("exact_split", "true") == true);
  }

  TEST_CASE("seeded commands are bitwise repeatable") {
    Workspace ws;
    const auto base = concat({"train", "--input", ws.graph, "--seed", "4", "--deterministic"}, kSmallTrain);
    REQUIRE(gsn_run(concat(base, {"--out", ws.dir("a")})).code == 0);
    REQUIRE(gsn_run(concat(base, {"--out", ws.dir("b")})).code == 0);
    for (const char* f : {"params.json", "report.json"}) {
      CHECK_MESSAGE(slurp(fs::path(ws.dir("a")) / f) == slurp(fs::path(ws.dir("b")) / f), f);
    }
    CHECK(read_json(fs::path(ws.dir("a")) / "manifest.json")["config_hash"] ==
          read_json(fs::path(ws.dir("b")) / "manifest.json")["config_hash"]);

    const auto params = (fs::path(ws.dir("a")) / "params.json").string();
    const std::vector<std::string> embed{"embed", "--input", ws.graph, "--params", params, "--k", "4",
                                         "--n-steps", "6", "--seed", "9", "--deterministic"};
    REQUIRE(gsn_run(concat(embed, {"--out", ws.dir("ea")})).code == 0);
    REQUIRE(gsn_run(concat(embed, {"--out", ws.dir("eb"), "--threads", "3"})).code == 0);
    CHECK(slurp(fs::path(ws.dir("ea")) / "embeddings.txt") == slurp(fs::path(ws.dir("eb")) / "embeddings.txt"));
  }

  TEST_CASE("a manifest reruns to the same outputs") {
    Workspace ws;
    const auto out = ws.dir("run1");
    REQUIRE(gsn_run(concat({"train", "--input", ws.graph, "--seed", "2", "--out", out}, kSmallTrain)).code == 0);
    const auto manifest = (fs::path(out) / "manifest.json").string();
    const auto r = gsn_run({"--from-manifest", manifest, "--out", ws.dir("run2")});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const char* f : {"params.json", "report.json"}) {
      CHECK(slurp(fs::path(out) / f) == slurp(fs::path(ws.dir("run2")) / f));
    }

    std::ofstream(ws.graph, std::ios::app) << "100 101 1\n";
    CHECK(gsn_run({"--from-manifest", manifest, "--out", ws.dir("run3")}).code == 1);
  }

  TEST_CASE("embed with zero steps returns the initial positions") {
    Workspace ws;
    const auto train_dir = ws.dir("t");
    REQUIRE(gsn_run(concat({"train", "--input", ws.graph, "--out", train_dir}, kSmallTrain)).code == 0);
    const auto params = (fs::path(train_dir) / "params.json").string();
    const auto out = ws.dir("e");
    const auto r = gsn_run({"embed", "--input", ws.graph, "--params", params, "--k", "4", "--n-steps", "0",
                            "--seed", "5", "--binary", "--out", out});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto x = gsn::read_embeddings(fs::path(out) / "embeddings.bin");
    gsn::SimConfig sim;
    sim.k = 4;
    sim.seed = 5;
    const auto x0 = gsn::init_state(x.rows(), sim).x;
    REQUIRE(x.rows() == 30);
    bool same = true;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) same = same && x(i, j) == x0(i, j);
    }
    CHECK(same);
    const json timing = read_json(fs::path(out) / "timing.json");
    CHECK(timing.contains("embedding_ms"));
  }

  TEST_CASE("embed rejects a dimension the parameters were not trained with") {
    Workspace ws;
    const auto train_dir = ws.dir("t");
    REQUIRE(gsn_run(concat({"train", "--input", ws.graph, "--out", train_dir}, kSmallTrain)).code == 0);
    const auto params = (fs::path(train_dir) / "params.json").string();
    const auto r = gsn_run({"embed", "--input", ws.graph, "--params", params, "--k", "8", "--out", ws.dir("e")});
    CHECK(r.code == 2);
    CHECK(r.err.find("k=4") != std::string::npos);
  }

  TEST_CASE("eval of saved embeddings matches eval from parameters") {
    Workspace ws;
    const auto train_dir = ws.dir("t");
    REQUIRE(gsn_run(concat({"train", "--input", ws.graph, "--out", train_dir}, kSmallTrain)).code == 0);
    const auto params = (fs::path(train_dir) / "params.json").string();
    const std::vector<std::string> common{"--input", ws.graph, "--k", "4", "--n-steps", "6", "--seed", "3"};
    REQUIRE(gsn_run(concat(concat({"embed", "--params", params}, common), {"--out", ws.dir("e")})).code == 0);
    const auto emb = (fs::path(ws.dir("e")) / "embeddings.txt").string();
    REQUIRE(gsn_run(concat(concat({"eval", "--embeddings", emb}, common), {"--out", ws.dir("v1")})).code == 0);
    REQUIRE(gsn_run(concat(concat({"eval", "--params", params}, common), {"--out", ws.dir("v2")})).code == 0);
    const auto a = gsn::report_from_json(slurp(fs::path(ws.dir("v1")) / "report.json"));
    const auto b = gsn::report_from_json(slurp(fs::path(ws.dir("v2")) / "report.json"));
    CHECK(a.auc_l == b.auc_l);
    CHECK(a.f1_macro == b.f1_macro);
    CHECK(a.n_hidden == b.n_hidden);
    const auto text = slurp(fs::path(ws.dir("v1")) / "report.txt");
    for (const char* col : {"F1-MI", "F1-MA", "F1-WT", "F1-BI", "AUC-P", "AUC-L"}) {
      CHECK(text.find(col) != std::string::npos);
    }
  }

  TEST_CASE("multi-seed eval writes one report per run plus the aggregate") {
    Workspace ws;
    const auto train_dir = ws.dir("t");
    REQUIRE(gsn_run(concat({"train", "--input", ws.graph, "--out", train_dir}, kSmallTrain)).code == 0);
    const auto params = (fs::path(train_dir) / "params.json").string();
    const auto out = ws.dir("v");
    const auto r = gsn_run({"eval", "--input", ws.graph, "--params", params, "--k", "4", "--n-steps", "6",
                            "--repeats", "5", "--out", out});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < 5; ++i) {
      const auto p = fs::path(out) / ("report_" + std::to_string(i) + ".json");
      REQUIRE(fs::exists(p));
      seeds.push_back(gsn::report_from_json(slurp(p)).seed);
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::unique(seeds.begin(), seeds.end()) == seeds.end());
    const json agg = read_json(fs::path(out) / "aggregate.json");
    CHECK(agg["n_runs"] == 5);
    CHECK(agg.contains("auc_l"));
  }

  TEST_CASE("ingest and split write dumps that load back") {
    Workspace ws;
    REQUIRE(gsn_run({"ingest", "--input", ws.graph, "--out", ws.dir("i")}).code == 0);
    const auto dump = (fs::path(ws.dir("i")) / "graph.txt").string();
    const json stats = read_json(fs::path(ws.dir("i")) / "stats.json");
    CHECK(stats["staged_edges"] == 90);

    REQUIRE(gsn_run({"split", "--input", dump, "--format", "dump", "--p-hidden", "0.3", "--exact-split",
                     "--out", ws.dir("s")})
                .code == 0);
    const auto g = gsn::read_dump(fs::path(ws.dir("s")) / "split.txt");
    CHECK(gsn::hidden_edges(g).size() == 27);

    // The hidden set written by split can be fed back explicitly.
    const auto hidden = (fs::path(ws.dir("s")) / "hidden.txt").string();
    REQUIRE(gsn_run({"split", "--input", ws.graph, "--hidden-edges", hidden, "--out", ws.dir("s2")}).code == 0);
    CHECK(slurp(fs::path(ws.dir("s2")) / "split.txt") == slurp(fs::path(ws.dir("s")) / "split.txt"));
  }

  TEST_CASE("bench writes the timing table and doubling ratios") {
    Workspace ws;
    const auto out = ws.dir("b");
    const auto r = gsn_run({"bench", "--bench-nodes", "200", "--bench-edges", "400,800", "--bench-k", "4,8",
                            "--bench-runs", "3", "--bench-sim-steps", "2", "--out", out});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto csv = slurp(fs::path(out) / "bench.csv");
    CHECK(csv.rfind("n_nodes,n_edges,k,op,median_ms,iqr_ms\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    const json s = read_json(fs::path(out) / "bench_summary.json");
    CHECK(s["gsn_apply"]["edge_doubling"].size() == 2);
    CHECK(s["gsn_apply"]["dim_doubling"].size() == 2);
  }

  TEST_CASE("synthetic benchmark graphs") {
    const auto g = gsn::cli::synthetic_graph(1000, 5000, 3);
    CHECK(g.n_edges() == 5000);
    const double pos = double(g.count_true(gsn::Sign::positive)) / 5000.0;
    CHECK(pos == doctest::Approx(0.85).epsilon(0.03));
    const auto again = gsn::cli::synthetic_graph(1000, 5000, 3);
    CHECK(again.edges().back().v == g.edges().back().v);
  }
}
