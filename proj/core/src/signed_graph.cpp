#include "gsn/signed_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "gsn/rng.hpp"

namespace gsn {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Sign sign_from_int(long value) {
  switch (value) {
    case -1: return Sign::negative;
    case 0: return Sign::neutral;
    case 1: return Sign::positive;
    default: throw GraphError("sign must be -1, 0 or 1, got " + std::to_string(value));
  }
}

EdgeFormat parse_edge_format(const std::string& name) {
  if (name == "plain") return EdgeFormat::plain;
  if (name == "rating_csv") return EdgeFormat::rating_csv;
  if (name == "dump") return EdgeFormat::dump;
  throw std::invalid_argument("unknown edge format '" + name + "'");
}

std::string to_string(EdgeFormat format) {
  switch (format) {
    case EdgeFormat::plain: return "plain";
    case EdgeFormat::rating_csv: return "rating_csv";
    case EdgeFormat::dump: return "dump";
  }
  return "?";
}

double StagedGraph::positive_fraction() const {
  if (edges.empty()) return 0.0;
  const auto pos = std::count_if(edges.begin(), edges.end(),
                                 [](const StagedEdge& e) { return e.sign == Sign::positive; });
  return static_cast<double>(pos) / static_cast<double>(edges.size());
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line, bool allow_whitespace) {
  std::vector<std::string_view> fields;
  auto trim = [](std::string_view f) {
    const auto b = f.find_first_not_of(" \t");
    if (b == std::string_view::npos) return std::string_view{};
    return f.substr(b, f.find_last_not_of(" \t") - b + 1);
  };
  if (!allow_whitespace) {
    std::size_t i = 0;
    while (true) {
      const auto j = line.find(',', i);
      fields.push_back(trim(line.substr(i, j == std::string_view::npos ? j : j - i)));
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
    return fields;
  }
  // Whitespace and commas both separate; runs of separators collapse.
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool parse_long(std::string_view s, long& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

struct RawEdge {
  std::string src;
  std::string dst;
  Sign sign;
  Sign observed;
};

StagedGraph remap(std::vector<RawEdge> raw) {
  std::vector<std::string> labels;
  labels.reserve(raw.size());
  for (const auto& e : raw) {
    labels.push_back(e.src);
    labels.push_back(e.dst);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  bool numeric = true;
  std::vector<long> values(labels.size());
  for (std::size_t i = 0; i < labels.size() && numeric; ++i) {
    numeric = parse_long(labels[i], values[i]);
  }
  if (numeric) {
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::string> sorted;
    sorted.reserve(labels.size());
    for (auto i : order) sorted.push_back(std::move(labels[i]));
    labels = std::move(sorted);
  }

  std::unordered_map<std::string, NodeId> index;
  index.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<NodeId>(i));

  StagedGraph staged;
  staged.edges.reserve(raw.size());
  for (const auto& e : raw) {
    staged.edges.push_back({index.at(e.src), index.at(e.dst), e.sign, e.observed});
  }
  staged.labels = std::move(labels);
  return staged;
}

}  // namespace

StagedGraph load_edge_list(std::istream& in, EdgeFormat format) {
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    const auto first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (view[first] == '#') continue;

    const auto fields = split_fields(view, format != EdgeFormat::rating_csv);
    RawEdge edge;
    long value = 0;
    switch (format) {
      case EdgeFormat::plain: {
        if (fields.size() != 3) throw ParseError(line_no, "expected 'src dst sign'");
        if (!parse_long(fields[2], value)) throw ParseError(line_no, "sign is not an integer");
        if (value != 1 && value != -1) throw ParseError(line_no, "sign must be -1 or 1");
        edge.sign = value > 0 ? Sign::positive : Sign::negative;
        edge.observed = edge.sign;
        break;
      }
      case EdgeFormat::rating_csv: {
        if (fields.size() != 3 && fields.size() != 4) {
          throw ParseError(line_no, "expected 'src,dst,rating[,timestamp]'");
        }
        if (!parse_long(fields[2], value)) throw ParseError(line_no, "rating is not an integer");
        if (value == 0) throw ParseError(line_no, "rating 0 has no sign");
        edge.sign = value > 0 ? Sign::positive : Sign::negative;
        edge.observed = edge.sign;
        break;
      }
      case EdgeFormat::dump: {
        if (fields.size() != 4) throw ParseError(line_no, "expected 'u v true_sign observed_sign'");
        long observed = 0;
        if (!parse_long(fields[2], value) || (value != 1 && value != -1)) {
          throw ParseError(line_no, "true sign must be -1 or 1");
        }
        if (!parse_long(fields[3], observed) || observed < -1 || observed > 1) {
          throw ParseError(line_no, "observed sign must be -1, 0 or 1");
        }
        if (observed != 0 && observed != value) {
          throw ParseError(line_no, "observed sign contradicts true sign");
        }
        edge.sign = sign_from_int(value);
        edge.observed = sign_from_int(observed);
        break;
      }
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty node id");
    edge.src = std::string(fields[0]);
    edge.dst = std::string(fields[1]);
    raw.push_back(std::move(edge));
  }
  if (raw.empty()) throw ParseError(line_no, "input contains no edges");
  return remap(std::move(raw));
}

StagedGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_edge_list(in, format);
}

SignedGraph::SignedGraph(std::size_t n_nodes, std::vector<Edge> edges,
                         std::vector<std::string> labels)
    : n_nodes_(n_nodes), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != n_nodes_) {
    throw GraphError("label table size does not match node count");
  }
  if (edges_.size() >= std::numeric_limits<std::uint32_t>::max() / 2) {
    throw GraphError("too many edges");
  }
  std::vector<std::size_t> degree(n_nodes_, 0);
  for (const auto& e : edges_) {
    if (e.u >= e.v) throw GraphError("edge endpoints must satisfy u < v");
    if (e.v >= n_nodes_) throw GraphError("edge endpoint out of range");
    if (e.true_sign == Sign::neutral) throw GraphError("true sign must be nonzero");
    if (e.observed_sign != Sign::neutral && e.observed_sign != e.true_sign) {
      throw GraphError("observed sign must equal the true sign or be hidden");
    }
    ++degree[e.u];
    ++degree[e.v];
  }

  offsets_.assign(n_nodes_ + 1, 0);
  for (std::size_t i = 0; i < n_nodes_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  half_edges_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Scanning edges in index order keeps every node's list ascending.
  for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
    const auto& e = edges_[idx];
    const auto pu = cursor[e.u]++;
    const auto pv = cursor[e.v]++;
    half_edges_[pu] = {e.v, static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(pv)};
    half_edges_[pv] = {e.u, static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(pu)};
  }

  for (std::size_t i = 0; i < n_nodes_; ++i) {
    auto span = incident(static_cast<NodeId>(i));
    if (span.size() < 2) continue;
    std::vector<NodeId> nbrs;
    nbrs.reserve(span.size());
    for (const auto& h : span) nbrs.push_back(h.neighbor);
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw GraphError("duplicate undirected edge");
    }
  }
}

std::string SignedGraph::label(NodeId i) const {
  return labels_.empty() ? std::to_string(i) : labels_[i];
}

SignedGraph SignedGraph::with_observed(std::span<const Sign> observed) const {
  if (observed.size() != edges_.size()) throw GraphError("observed sign vector size mismatch");
  std::vector<Edge> edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].observed_sign = observed[i];
  return SignedGraph(n_nodes_, std::move(edges), labels_);
}

std::size_t SignedGraph::count_observed(Sign s) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [s](const Edge& e) { return e.observed_sign == s; }));
}

std::size_t SignedGraph::count_true(Sign s) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [s](const Edge& e) { return e.true_sign == s; }));
}

SignedGraph to_undirected(const StagedGraph& staged) {
  struct Merged {
    Sign sign;
    Sign observed;
  };
  std::map<std::pair<NodeId, NodeId>, Merged> pairs;
  for (const auto& e : staged.edges) {
    if (e.src == e.dst) continue;
    const auto key = std::minmax(e.src, e.dst);
    auto [it, inserted] = pairs.try_emplace({key.first, key.second}, Merged{e.sign, e.observed});
    if (inserted) continue;
    auto& m = it->second;
    if (e.sign == Sign::negative) m.sign = Sign::negative;
    if (m.observed == Sign::neutral || e.observed == Sign::neutral) {
      m.observed = Sign::neutral;
    } else {
      m.observed = m.sign;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, m] : pairs) {
    const Sign observed = m.observed == Sign::neutral ? Sign::neutral : m.sign;
    edges.push_back({key.first, key.second, m.sign, observed});
  }
  return SignedGraph(staged.n_nodes(), std::move(edges), staged.labels);
}

StagedGraph to_staged(const SignedGraph& graph) {
  StagedGraph staged;
  staged.labels = graph.labels();
  if (staged.labels.empty()) {
    for (std::size_t i = 0; i < graph.n_nodes(); ++i) staged.labels.push_back(std::to_string(i));
  }
  staged.edges.reserve(graph.n_edges());
  for (const auto& e : graph.edges()) {
    staged.edges.push_back({e.u, e.v, e.true_sign, e.observed_sign});
  }
  return staged;
}

HiddenSplit hide_signs(const SignedGraph& graph, const SplitSpec& spec) {
  return hide_signs(graph, spec, rng::tags::hide);
}

HiddenSplit hide_signs(const SignedGraph& graph, const SplitSpec& spec, std::uint64_t purpose) {
  if (!(spec.p_hidden >= 0.0 && spec.p_hidden <= 1.0)) {
    throw std::invalid_argument("p_hidden must lie in [0, 1]");
  }
  const std::size_t m = graph.n_edges();
  std::vector<double> draws(m);
  for (std::size_t e = 0; e < m; ++e) draws[e] = rng::uniform(spec.seed, purpose, e);

  std::vector<bool> hide(m, false);
  if (spec.exact) {
    const auto target = static_cast<std::size_t>(std::ceil(spec.p_hidden * static_cast<double>(m) - 1e-9));
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return draws[a] < draws[b]; });
    for (std::size_t i = 0; i < std::min(target, m); ++i) hide[order[i]] = true;
  } else {
    for (std::size_t e = 0; e < m; ++e) hide[e] = draws[e] < spec.p_hidden;
  }

  std::vector<Sign> observed(m);
  HiddenSplit out;
  for (std::size_t e = 0; e < m; ++e) {
    const auto& edge = graph.edge(e);
    if (hide[e] && edge.observed_sign != Sign::neutral) {
      observed[e] = Sign::neutral;
      out.hidden.push_back(e);
    } else {
      observed[e] = edge.observed_sign;
    }
  }
  out.graph = graph.with_observed(observed);
  return out;
}

std::vector<std::size_t> hidden_edges(const SignedGraph& graph) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < graph.n_edges(); ++e) {
    if (graph.edge(e).observed_sign == Sign::neutral) out.push_back(e);
  }
  return out;
}

double nearest_rank_percentile(std::vector<std::uint32_t> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return static_cast<double>(values[rank - 1]);
}

NodeStatics compute_node_statics(const SignedGraph& graph) {
  NodeStatics s;
  const auto n = graph.n_nodes();
  s.deg.resize(n);
  s.neg_frac.assign(n, 0.0);
  s.pos_frac.assign(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const auto inc = graph.incident(i);
    s.deg[i] = static_cast<std::uint32_t>(inc.size());
    if (inc.empty()) continue;
    std::size_t neg = 0;
    std::size_t pos = 0;
    for (const auto& h : inc) {
      const Sign o = graph.edge(h.edge).observed_sign;
      neg += o == Sign::negative;
      pos += o == Sign::positive;
    }
    s.neg_frac[i] = static_cast<double>(neg) / static_cast<double>(inc.size());
    s.pos_frac[i] = static_cast<double>(pos) / static_cast<double>(inc.size());
  }
  s.p80 = nearest_rank_percentile(s.deg, 0.8);
  if (graph.n_edges() > 0) s.p80 = std::max(s.p80, 1.0);
  return s;
}

void write_dump(std::ostream& out, const SignedGraph& graph) {
  for (const auto& e : graph.edges()) {
    out << graph.label(e.u) << ' ' << graph.label(e.v) << ' ' << to_int(e.true_sign) << ' '
        << to_int(e.observed_sign) << '\n';
  }
}

void write_dump(const std::filesystem::path& path, const SignedGraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_dump(out, graph);
}

SignedGraph read_dump(const std::filesystem::path& path) {
  return to_undirected(load_edge_list(path, EdgeFormat::dump));
}

}  // namespace gsn
