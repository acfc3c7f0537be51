#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsn {

using NodeId = std::uint32_t;

/// Edge sign as observed by the model. `neutral` marks a hidden sign.
enum class Sign : std::int8_t { negative = -1, neutral = 0, positive = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
Sign sign_from_int(long value);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EdgeFormat {
  plain,       // "src dst sign", whitespace or comma separated, sign in {-1, 1}
  rating_csv,  // "src,dst,rating[,timestamp]", sign taken from a nonzero integer rating
  dump,        // "u v true_sign observed_sign", the canonical dump written by write_dump
};

EdgeFormat parse_edge_format(const std::string& name);
std::string to_string(EdgeFormat format);

struct StagedEdge {
  NodeId src;
  NodeId dst;
  Sign sign;          // true sign
  Sign observed;      // equals sign except when read back from a dump
};

/// Directed edges as read from disk, with raw labels remapped to dense ids.
/// Dense ids follow the sorted order of the raw labels (numeric when every
/// label is an integer, lexicographic otherwise) so reloading a dump is stable.
struct StagedGraph {
  std::vector<std::string> labels;
  std::vector<StagedEdge> edges;

  std::size_t n_nodes() const { return labels.size(); }
  double positive_fraction() const;
};

StagedGraph load_edge_list(std::istream& in, EdgeFormat format);
StagedGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format);

struct Edge {
  NodeId u;  // u < v
  NodeId v;
  Sign true_sign;
  Sign observed_sign;
};

/// One side of an undirected edge as seen from its source node.
struct HalfEdge {
  NodeId neighbor;
  std::uint32_t edge;  // index into SignedGraph::edges()
  std::uint32_t twin;  // CSR position of the opposite half-edge
};

/// Immutable undirected signed graph with CSR incidence.
class SignedGraph {
 public:
  SignedGraph() = default;
  /// Validates the invariants: u < v, no duplicate pairs, true signs nonzero,
  /// observed sign either the true sign or neutral.
  SignedGraph(std::size_t n_nodes, std::vector<Edge> edges, std::vector<std::string> labels = {});

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(NodeId i) const;

  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  /// Incident half-edges of i, ascending by edge index.
  std::span<const HalfEdge> incident(NodeId i) const {
    return {half_edges_.data() + offsets_[i], degree(i)};
  }
  std::size_t half_edge_offset(NodeId i) const { return offsets_[i]; }
  std::span<const HalfEdge> half_edges() const { return half_edges_; }

  /// Same structure with replaced observed signs.
  SignedGraph with_observed(std::span<const Sign> observed) const;

  std::size_t count_observed(Sign s) const;
  std::size_t count_true(Sign s) const;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<HalfEdge> half_edges_;
};

/// Merges directed duplicates into one undirected edge per pair. A pair is
/// negative if any directed instance is negative. Self-loops are dropped and
/// edges come out sorted by (min id, max id).
SignedGraph to_undirected(const StagedGraph& staged);

/// Expands each undirected edge back into a single staged edge (u -> v).
StagedGraph to_staged(const SignedGraph& graph);

struct SplitSpec {
  double p_hidden = 0.2;
  std::uint64_t seed = 0;
  /// Hide exactly ceil(p_hidden * M) edges (those with the smallest draws)
  /// instead of an independent Bernoulli trial per edge.
  bool exact = false;
};

struct HiddenSplit {
  SignedGraph graph;
  std::vector<std::size_t> hidden;  // ascending edge indices
};

/// Hides edge signs: edge e is hidden when uniform(seed, purpose, e) < p_hidden.
/// Edges that are already hidden stay hidden and are not reported again.
HiddenSplit hide_signs(const SignedGraph& graph, const SplitSpec& spec);
HiddenSplit hide_signs(const SignedGraph& graph, const SplitSpec& spec, std::uint64_t purpose);

/// Edge indices whose observed sign is neutral.
std::vector<std::size_t> hidden_edges(const SignedGraph& graph);

struct NodeStatics {
  std::vector<std::uint32_t> deg;
  std::vector<double> neg_frac;
  std::vector<double> pos_frac;
  double p80 = 0.0;

  std::size_t size() const { return deg.size(); }
};

/// Degree and observed-sign fractions per node (denominator: full degree),
/// plus the nearest-rank 80th percentile of the degree multiset.
NodeStatics compute_node_statics(const SignedGraph& graph);

/// Nearest-rank percentile: the ceil(q * n)-th smallest value (1-based).
double nearest_rank_percentile(std::vector<std::uint32_t> values, double q);

/// Canonical dump: "u v true_sign observed_sign" per line in edge order,
/// using raw labels.
void write_dump(std::ostream& out, const SignedGraph& graph);
void write_dump(const std::filesystem::path& path, const SignedGraph& graph);

/// Reads a canonical dump back, preserving observed signs.
SignedGraph read_dump(const std::filesystem::path& path);

}  // namespace gsn
