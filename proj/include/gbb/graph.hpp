#pragma once

// Interaction graphs over n agents, the greedy two-way cut used to allocate
// a pair of arms, and the edge statistics of a cut.
//
// Nodes are 0-based in the C++ API. The JSON form uses 1-based indices.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gbb/rng.hpp"

namespace gbb {

struct Edge {
  int from = 0;
  int to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class GraphFamily { complete, erdos_renyi, circle, star, matching };

std::string_view to_string(GraphFamily family);
GraphFamily graph_family_from_string(std::string_view name);

struct GraphKind {
  GraphFamily family = GraphFamily::complete;
  double p = 0.6;  // erdos_renyi only
};

/// Directed graph with symmetric edge set, no self loops and no duplicates.
/// Edges are kept sorted by (from, to).
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const int> neighbors(int node) const { return adjacency_.at(node); }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Edge counts of a two-way split: m12 edges go V1 -> V2, m21 go V2 -> V1,
/// m1 and m2 stay inside V1 and V2.
struct EdgeCounts {
  long m12 = 0;
  long m21 = 0;
  long m1 = 0;
  long m2 = 0;

  long total() const { return m12 + m21 + m1 + m2; }
  long cut() const { return m12 + m21; }
  double within_fraction() const {
    return total() == 0 ? 0.0 : static_cast<double>(m1 + m2) / static_cast<double>(total());
  }
  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;
};

enum class Side : std::uint8_t { first, second };

struct Partition {
  std::vector<int> v1;
  std::vector<int> v2;
  std::vector<Side> side;  // side[i] for every node
  EdgeCounts counts;
};

Graph build_graph(GraphKind kind, int n, Rng& rng);

/// Greedy cut: visit nodes in ascending index order, put node i into V2 iff it
/// has strictly more already-placed neighbours in V1 than in V2. Cuts at least
/// half of the edges.
Partition approx_max_cut(const Graph& g);

/// Same greedy pass over an explicit visiting order (a permutation of 0..n-1).
Partition approx_max_cut(const Graph& g, std::span<const int> order);

/// Greedy pass over a seeded random permutation of the nodes.
Partition approx_max_cut_shuffled(const Graph& g, Rng& rng);

/// Throws std::invalid_argument unless v1 and v2 partition the node set.
EdgeCounts partition_counts(const Graph& g, std::span<const int> v1, std::span<const int> v2);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace gbb
