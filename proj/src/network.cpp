#include "snsmq/network.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>

#include "snsmq/rng.hpp"

namespace snsmq {

bool Graph::has_edge(NodeId a, NodeId b) const {
  const auto& na = adj_.at(a);
  return std::binary_search(na.begin(), na.end(), b);
}

bool Graph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw ConfigError("self-loop on node " + std::to_string(a));
  if (a >= adj_.size() || b >= adj_.size()) throw ConfigError("edge endpoint out of range");
  auto& na = adj_[a];
  auto it = std::lower_bound(na.begin(), na.end(), b);
  if (it != na.end() && *it == b) return false;
  na.insert(it, b);
  auto& nb = adj_[b];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
  ++edge_count_;
  return true;
}

NodeId Graph::add_node() {
  adj_.emplace_back();
  return static_cast<NodeId>(adj_.size() - 1);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId i = 0; i < adj_.size(); ++i)
    for (NodeId j : adj_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

bool Graph::is_connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(adj_.size(), 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : adj_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == adj_.size();
}

void ConnConfig::validate() const {
  if (n < 2) throw ConfigError("network size n must be >= 2");
  if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("conversion probability u must lie in [0, 1]");
}

namespace {

// Potential edges, keyed by unordered pair, with O(1) uniform sampling and
// removal (swap-with-last on a dense vector plus a position index).
class PotentialEdges {
 public:
  bool empty() const { return pairs_.empty(); }

  void insert(NodeId a, NodeId b) {
    auto key = make_key(a, b);
    if (index_.contains(key)) return;
    index_.emplace(key, pairs_.size());
    pairs_.push_back(key);
  }

  std::uint64_t take(Rng& rng) {
    std::size_t pos = rng.below(pairs_.size());
    std::uint64_t key = pairs_[pos];
    index_.erase(key);
    if (pos + 1 != pairs_.size()) {
      pairs_[pos] = pairs_.back();
      index_[pairs_[pos]] = pos;
    }
    pairs_.pop_back();
    return key;
  }

  static std::uint64_t make_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

 private:
  std::vector<std::uint64_t> pairs_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace

Graph generate_conn(const ConnConfig& config) {
  config.validate();
  Rng rng(config.seed);
  Graph g(2);
  g.add_edge(0, 1);
  PotentialEdges potential;

  while (g.node_count() < config.n) {
    const bool edge_step = rng.bernoulli(config.u);
    if (edge_step && !potential.empty()) {
      auto key = potential.take(rng);
      g.add_edge(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu));
      continue;
    }
    const NodeId anchor = static_cast<NodeId>(rng.below(g.node_count()));
    const NodeId fresh = g.add_node();
    g.add_edge(fresh, anchor);
    for (NodeId nb : g.neighbors(anchor)) {
      // anchor's list already contains the new node itself
      if (nb != fresh) potential.insert(fresh, nb);
    }
  }
  return g;
}

void save_edge_list(const Graph& graph, std::ostream& out) {
  out << "# nodes=" << graph.node_count() << '\n';
  for (auto [a, b] : graph.edges()) out << a << ' ' << b << '\n';
}

Graph load_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("edge list: missing header");
  const std::string prefix = "# nodes=";
  if (line.rfind(prefix, 0) != 0) throw FormatError("edge list: bad header '" + line + "'");
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoull(line.substr(prefix.size()), &used);
    if (used != line.size() - prefix.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw FormatError("edge list: bad node count in '" + line + "'");
  }
  Graph g(n);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long a = -1, b = -1;
    std::string rest;
    if (!(ls >> a >> b) || (ls >> rest) || a < 0 || b < 0 ||
        static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n || a == b)
      throw FormatError("edge list: bad edge on line " + std::to_string(lineno));
    g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return g;
}

}  // namespace snsmq
