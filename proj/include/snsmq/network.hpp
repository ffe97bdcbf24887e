#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace snsmq {

using NodeId = std::uint32_t;

/// Raised for invalid user-supplied parameters (bad counts, probabilities...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when input files cannot be parsed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph on dense node ids 0..N-1.
/// Neighbor lists are kept sorted and duplicate free.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adj_(node_count) {}

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId id) const { return adj_.at(id); }
  std::size_t degree(NodeId id) const { return adj_.at(id).size(); }
  bool has_edge(NodeId a, NodeId b) const;

  /// Adds the undirected edge {a, b}. Returns false if it already existed.
  /// Throws ConfigError on self-loops or out-of-range ids.
  bool add_edge(NodeId a, NodeId b);

  NodeId add_node();

  /// Edges as (lo, hi) pairs in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool is_connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

struct ConnConfig {
  std::size_t n = 400;
  double u = 0.9;  // conversion probability
  std::uint64_t seed = 0;

  void validate() const;
};

/// Grows a connecting-nearest-neighbor network from the 2-node complete graph.
///
/// Each step is an edge addition with probability u (a uniformly chosen
/// potential edge becomes actual) and an agent addition otherwise (the new
/// node links to a uniformly chosen existing node and gets potential edges to
/// all of that node's neighbors). An edge addition drawn while no potential
/// edges exist is performed as an agent addition. Stops at n nodes.
Graph generate_conn(const ConnConfig& config);

/// Edge-list text: "# nodes=N" header, then one "i j" line per edge (i < j).
void save_edge_list(const Graph& graph, std::ostream& out);
Graph load_edge_list(std::istream& in);

}  // namespace snsmq
