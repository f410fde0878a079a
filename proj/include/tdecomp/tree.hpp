#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdecomp/graph.hpp"
#include "tdecomp/rng.hpp"

namespace tdecomp {

class TreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Unrooted tree on vertices 0..k-1 with k >= 2.
class Tree {
public:
  // Throws TreeError unless the edges form a tree spanning 0..k-1.
  Tree(std::size_t k, std::vector<Edge> edges);
  // Parent array for vertices 1..k-1 (vertex 0 is the root).
  static Tree from_parents(const std::vector<Vertex>& parents);

  static Tree path(std::size_t edges);
  static Tree star(std::size_t leaves);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const;
  bool is_leaf(Vertex v) const { return degree(v) == 1; }

  // Parent of each vertex when rooted at 0; entry 0 is unused (0).
  std::vector<Vertex> parent_array() const;

private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

struct Arc {
  Vertex tail;
  Vertex head;
  bool operator==(const Arc&) const = default;
};

// Tree family F = {H_1, ..., H_k}; indices are 0-based throughout.
struct Family {
  std::vector<Tree> trees;

  std::size_t size() const { return trees.size(); }
  std::size_t edges(std::size_t i) const { return trees[i].edge_count(); }
  // c = h_1 + ... + h_k.
  std::size_t total_edges() const;
};

inline constexpr std::size_t no_parent = static_cast<std::size_t>(-1);

// A tree oriented away from a leaf root. Slot i holds the i-th arc discovered
// by breadth-first search; parent[i] is the slot of the arc entering arcs[i].tail.
struct RootedTree {
  Tree base;
  Vertex root;
  std::vector<Arc> arcs;
  std::vector<std::size_t> parent;  // parent[0] == no_parent, parent[i] < i otherwise

  std::size_t h() const { return arcs.size(); }
  // Slots of the subtree hanging from slot i, including i, in increasing order.
  std::vector<std::size_t> descendents(std::size_t slot) const;
  // Depth-0 slot is the root arc; depth[i] = depth[parent[i]] + 1.
  std::vector<std::size_t> depth() const;
};

// Children are visited in ascending vertex id. Throws TreeError if q is not a leaf.
RootedTree root_at_leaf(const Tree& t, Vertex q);
// Lowest-id leaf.
Vertex lowest_leaf(const Tree& t);

struct ConcatPart {
  Tree tree;
  std::optional<Vertex> attach;  // canonical centroid when absent
};

struct Concatenation {
  Tree tree;
  // originator[e] = index of the part that contributed edge e of tree.
  std::vector<std::size_t> originator;
  // vertex_map[part][v] = vertex of tree that part vertex v became.
  std::vector<std::vector<Vertex>> vertex_map;
  // Edges of tree contributed by each part, in the part's own edge order.
  std::vector<std::vector<std::size_t>> part_edges;
};

// Identifies the attach vertex of every part into a single vertex (vertex 0).
Concatenation concatenate(const std::vector<ConcatPart>& parts);

std::vector<Vertex> centroids(const Tree& t);
// Centroid whose rooted code is smallest; this is the vertex ahu_canonical roots at.
Vertex canonical_centroid(const Tree& t);

// Rooted AHU code of the subtree hanging from root.
std::string rooted_code(const Tree& t, Vertex root);
// Equal for two trees exactly when they are isomorphic.
std::string ahu_canonical(const Tree& t);

// Tree spanned by an edge list of some host graph, relabelled to 0..k-1;
// nullopt if the edges are empty or do not form a tree.
std::optional<Tree> tree_from_host_edges(const std::vector<Edge>& edges);

// Randomized greedy embedding of t into g avoiding forbidden edges. Up to
// `attempts` tries, alternating between the e(t)-core and the whole available
// graph. Returns the host edge ids in t's edge order; nullopt is a strategy
// failure, not a proof that no copy exists.
std::optional<std::vector<EdgeId>> embed_tree(const Graph& g, const Tree& t,
                                              const EdgeMask& forbidden, Rng& rng,
                                              int attempts = 32);

// Same, but only vertices with allowed[v] may be used.
std::optional<std::vector<EdgeId>> embed_tree_within(const Graph& g, const Tree& t,
                                                     const EdgeMask& forbidden,
                                                     const std::vector<bool>& allowed,
                                                     Rng& rng, int attempts = 32);

// Tree file format: one tree per line, "k p_1 ... p_{k-1}".
Tree parse_tree_line(const std::string& line);
std::string format_tree_line(const Tree& t);
Family read_family(std::istream& in);
Family read_family_file(const std::string& path);
void write_family(std::ostream& out, const Family& family);

} // namespace tdecomp
