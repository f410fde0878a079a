#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tdecomp/rng.hpp"

namespace tdecomp {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Color : std::uint8_t { red, blue };

struct Edge {
  Vertex u;
  Vertex v;

  Vertex other(Vertex x) const { return x == u ? v : u; }
  bool operator==(const Edge&) const = default;
};

struct Incidence {
  Vertex neighbor;
  EdgeId edge;
};

// Membership mask over the edge ids of one graph.
using EdgeMask = std::vector<bool>;

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Undirected simple graph on vertices 0..n-1. Edges keep the endpoint order
// and the insertion order they were added with, so text round trips are exact.
class Graph {
public:
  Graph() = default;
  explicit Graph(std::size_t n);

  // Throws GraphError on self-loops, duplicates, out-of-range endpoints, or a
  // color mix (some edges colored, some not).
  EdgeId add_edge(Vertex u, Vertex v, std::optional<Color> color = std::nullopt);

  std::size_t n() const { return adjacency_.size(); }
  std::size_t m() const { return edges_.size(); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  bool colored() const { return !colors_.empty(); }
  Color color(EdgeId e) const;

  std::span<const Incidence> incident(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  std::size_t degree(Vertex v, Color c) const;

  bool has_edge(Vertex u, Vertex v) const { return find_edge(u, v).has_value(); }
  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;

  std::size_t max_degree() const;
  std::size_t min_degree() const;

  // Spanning subgraph keeping edges whose mask bit is set (colors carried over).
  Graph subgraph(const EdgeMask& keep) const;
  // Spanning subgraph of the edges with the given color.
  Graph color_class(Color c) const;

private:
  std::vector<Edge> edges_;
  std::vector<Color> colors_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
};

std::uint64_t edge_key(Vertex u, Vertex v);

struct VertexSubset {
  std::vector<Vertex> members;
};

// G(n, p): every unordered pair independently with probability p. Edges come
// out sorted by (u, v) with u < v.
Graph gen_gnp(std::size_t n, double p, Rng& rng);

// Two-colored G(n, p): red with probability p/15, blue with probability 14p/15.
Graph gen_colored_gnp(std::size_t n, double p, Rng& rng);

// Colors an uncolored graph, each edge red independently with probability red_share.
Graph color_randomly(const Graph& g, double red_share, Rng& rng);

// Edges with exactly one endpoint in X. Throws std::invalid_argument on empty X.
std::size_t out_count(const Graph& g, const VertexSubset& x,
                      std::optional<Color> color_filter = std::nullopt);
// Edges with both endpoints in X.
std::size_t in_count(const Graph& g, const VertexSubset& x,
                     std::optional<Color> color_filter = std::nullopt);

// The d-core of G minus the forbidden edges, as a mask over G's edge ids.
EdgeMask core_mask(const Graph& g, std::size_t d, const EdgeMask& forbidden = {});
// The d-core as a spanning subgraph; vertices outside the core are isolated.
Graph peel_to_min_degree(const Graph& g, std::size_t d, const EdgeMask& forbidden = {});

// Edge-list text format: "n m" followed by m lines "u v [r|b]".
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Graph& g);

} // namespace tdecomp
