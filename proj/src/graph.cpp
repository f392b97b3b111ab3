#include "gbb/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace gbb {

std::string_view to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::complete: return "complete";
    case GraphFamily::erdos_renyi: return "erdos_renyi";
    case GraphFamily::circle: return "circle";
    case GraphFamily::star: return "star";
    case GraphFamily::matching: return "matching";
  }
  return "unknown";
}

GraphFamily graph_family_from_string(std::string_view name) {
  if (name == "complete") return GraphFamily::complete;
  if (name == "erdos_renyi" || name == "random") return GraphFamily::erdos_renyi;
  if (name == "circle") return GraphFamily::circle;
  if (name == "star") return GraphFamily::star;
  if (name == "matching") return GraphFamily::matching;
  throw std::invalid_argument(fmt::format("unknown graph family '{}'", name));
}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(n > 0 ? n : 0) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.from != b.from ? a.from < b.from : a.to < b.to; });
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw std::invalid_argument(fmt::format("edge ({},{}) out of range", e.from, e.to));
    if (e.from == e.to) throw std::invalid_argument(fmt::format("self loop at node {}", e.from));
    if (k > 0 && edges_[k - 1] == e)
      throw std::invalid_argument(fmt::format("duplicate edge ({},{})", e.from, e.to));
    adjacency_[e.from].push_back(e.to);
  }
  for (const Edge& e : edges_) {
    const auto& back = adjacency_[e.to];
    if (!std::binary_search(back.begin(), back.end(), e.from))
      throw std::invalid_argument(fmt::format("edge ({},{}) has no reverse", e.from, e.to));
  }
}

namespace {

void add_pair(std::vector<Edge>& edges, int i, int j) {
  edges.push_back({i, j});
  edges.push_back({j, i});
}

}  // namespace

Graph build_graph(GraphKind kind, int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("graph needs n >= 2");
  std::vector<Edge> edges;
  switch (kind.family) {
    case GraphFamily::complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add_pair(edges, i, j);
      break;
    case GraphFamily::erdos_renyi: {
      if (!(kind.p > 0.0 && kind.p <= 1.0))
        throw std::invalid_argument(fmt::format("edge probability {} outside (0,1]", kind.p));
      std::bernoulli_distribution coin(kind.p);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (coin(rng)) add_pair(edges, i, j);
      break;
    }
    case GraphFamily::circle:
      if (n == 2) {
        add_pair(edges, 0, 1);
      } else {
        for (int i = 0; i < n; ++i) add_pair(edges, i, (i + 1) % n);
      }
      break;
    case GraphFamily::star:
      for (int j = 1; j < n; ++j) add_pair(edges, 0, j);
      break;
    case GraphFamily::matching:
      if (n % 2 != 0) throw std::invalid_argument("matching graph needs an even node count");
      for (int i = 0; i < n; i += 2) add_pair(edges, i, i + 1);
      break;
  }
  return Graph(n, std::move(edges));
}

Partition approx_max_cut(const Graph& g, std::span<const int> order) {
  const int n = g.num_nodes();
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("visiting order must cover every node");
  std::vector<char> placed(n, 0);
  Partition part;
  part.side.assign(n, Side::first);
  for (int i : order) {
    if (i < 0 || i >= n || placed[i]) throw std::invalid_argument("visiting order is not a permutation");
    long n1 = 0;
    long n2 = 0;
    for (int j : g.neighbors(i)) {
      if (!placed[j]) continue;
      (part.side[j] == Side::first ? n1 : n2) += 1;
    }
    part.side[i] = n1 > n2 ? Side::second : Side::first;
    placed[i] = 1;
  }
  for (int i = 0; i < n; ++i) (part.side[i] == Side::first ? part.v1 : part.v2).push_back(i);
  part.counts = partition_counts(g, part.v1, part.v2);
  return part;
}

Partition approx_max_cut(const Graph& g) {
  std::vector<int> order(g.num_nodes());
  std::iota(order.begin(), order.end(), 0);
  return approx_max_cut(g, order);
}

Partition approx_max_cut_shuffled(const Graph& g, Rng& rng) {
  std::vector<int> order(g.num_nodes());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return approx_max_cut(g, order);
}

EdgeCounts partition_counts(const Graph& g, std::span<const int> v1, std::span<const int> v2) {
  const int n = g.num_nodes();
  std::vector<int> membership(n, 0);
  auto mark = [&](std::span<const int> set, int label) {
    for (int i : set) {
      if (i < 0 || i >= n) throw std::invalid_argument(fmt::format("node {} out of range", i));
      if (membership[i] != 0) throw std::invalid_argument(fmt::format("node {} appears twice in the split", i));
      membership[i] = label;
    }
  };
  mark(v1, 1);
  mark(v2, 2);
  if (std::find(membership.begin(), membership.end(), 0) != membership.end())
    throw std::invalid_argument("split does not cover every node");

  EdgeCounts c;
  for (const Edge& e : g.edges()) {
    const int a = membership[e.from];
    const int b = membership[e.to];
    if (a == 1 && b == 2) ++c.m12;
    else if (a == 2 && b == 1) ++c.m21;
    else if (a == 1) ++c.m1;
    else ++c.m2;
  }
  return c;
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.from + 1, e.to + 1});
  return {{"n", g.num_nodes()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be a [i, j] pair");
    edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
  }
  return Graph(n, std::move(edges));
}

}  // namespace gbb
