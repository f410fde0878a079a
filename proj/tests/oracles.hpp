#pragma once

// Brute-force reference implementations used only by the tests. None of this
// calls into the library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tdecomp/graph.hpp"
#include "tdecomp/tree.hpp"

namespace oracle {

using tdecomp::Edge;
using tdecomp::EdgeId;
using tdecomp::Graph;
using tdecomp::Tree;
using tdecomp::Vertex;

// Prüfer decoding: a sequence of length k-2 over 0..k-1 gives a labelled tree on k vertices.
inline Tree prufer_tree(const std::vector<Vertex>& seq) {
  const std::size_t k = seq.size() + 2;
  std::vector<std::size_t> degree(k, 1);
  for (auto x : seq) {
    ++degree[x];
  }
  std::vector<Edge> edges;
  for (auto x : seq) {
    for (Vertex leaf = 0; leaf < k; ++leaf) {
      if (degree[leaf] == 1) {
        edges.push_back({leaf, x});
        --degree[leaf];
        --degree[x];
        break;
      }
    }
  }
  std::vector<Vertex> last;
  for (Vertex v = 0; v < k; ++v) {
    if (degree[v] == 1) {
      last.push_back(v);
    }
  }
  edges.push_back({last[0], last[1]});
  return Tree(k, edges);
}

// All k^(k-2) labelled trees on k >= 2 vertices.
inline std::vector<Tree> all_labeled_trees(std::size_t k) {
  std::vector<Tree> out;
  if (k == 2) {
    out.push_back(Tree(2, {{0, 1}}));
    return out;
  }
  std::vector<Vertex> seq(k - 2, 0);
  while (true) {
    out.push_back(prufer_tree(seq));
    std::size_t i = 0;
    while (i < seq.size() && seq[i] == k - 1) {
      seq[i++] = 0;
    }
    if (i == seq.size()) {
      break;
    }
    ++seq[i];
  }
  return out;
}

// Isomorphism by trying every vertex bijection, pruned by degree.
inline bool isomorphic_brute(const Tree& a, const Tree& b) {
  const std::size_t k = a.vertex_count();
  if (k != b.vertex_count()) {
    return false;
  }
  std::set<std::pair<Vertex, Vertex>> eb;
  for (const auto& e : b.edges()) {
    eb.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::vector<Vertex> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (Vertex v = 0; v < k && ok; ++v) {
      ok = a.degree(v) == b.degree(perm[v]);
    }
    for (const auto& e : a.edges()) {
      if (!ok) {
        break;
      }
      Vertex x = perm[e.u];
      Vertex y = perm[e.v];
      ok = eb.count({std::min(x, y), std::max(x, y)}) > 0;
    }
    if (ok) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Union-find tree test: distinct edges, no cycle, spanning exactly e+1 vertices.
inline bool is_tree(const std::vector<Edge>& edges) {
  if (edges.empty()) {
    return false;
  }
  std::map<Vertex, Vertex> parent;
  std::function<Vertex(Vertex)> find = [&](Vertex x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) {
      return x;
    }
    Vertex r = find(it->second);
    parent[x] = r;
    return r;
  };
  for (const auto& e : edges) {
    if (e.u == e.v) {
      return false;
    }
    Vertex a = find(e.u);
    Vertex b = find(e.v);
    if (a == b) {
      return false;
    }
    parent[a] = b;
  }
  return parent.size() == edges.size() + 1;
}

// Whether g minus forbidden contains a subgraph isomorphic to t (exhaustive backtracking).
inline bool has_embedding(const Graph& g, const Tree& t, const std::vector<bool>& forbidden) {
  const std::size_t k = t.vertex_count();
  std::vector<Vertex> order{0};
  std::vector<Vertex> tparent(k, 0);
  std::vector<bool> seen(k, false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto y : t.neighbors(order[i])) {
      if (!seen[y]) {
        seen[y] = true;
        tparent[y] = order[i];
        order.push_back(y);
      }
    }
  }
  std::vector<Vertex> image(k, 0);
  std::vector<bool> taken(g.n(), false);
  auto usable = [&](Vertex a, Vertex b) {
    auto e = g.find_edge(a, b);
    return e && !(*e < forbidden.size() && forbidden[*e]);
  };
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == k) {
      return true;
    }
    Vertex x = order[i];
    for (Vertex cand = 0; cand < g.n(); ++cand) {
      if (taken[cand] || (i > 0 && !usable(image[tparent[x]], cand))) {
        continue;
      }
      taken[cand] = true;
      image[x] = cand;
      if (place(i + 1)) {
        return true;
      }
      taken[cand] = false;
    }
    return false;
  };
  return place(0);
}

// Edges with exactly one endpoint in x, counted straight from the edge list.
inline std::size_t out_direct(const Graph& g, const std::vector<bool>& in_x,
                              std::optional<tdecomp::Color> color = std::nullopt) {
  std::size_t count = 0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (color && g.color(e) != *color) {
      continue;
    }
    count += in_x[g.edge(e).u] != in_x[g.edge(e).v] ? 1 : 0;
  }
  return count;
}

inline std::size_t in_direct(const Graph& g, const std::vector<bool>& in_x,
                             std::optional<tdecomp::Color> color = std::nullopt) {
  std::size_t count = 0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (color && g.color(e) != *color) {
      continue;
    }
    count += in_x[g.edge(e).u] && in_x[g.edge(e).v] ? 1 : 0;
  }
  return count;
}

inline Graph complete_graph(std::size_t n, std::optional<tdecomp::Color> color = std::nullopt) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      g.add_edge(u, v, color);
    }
  }
  return g;
}

inline Graph from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                        std::optional<tdecomp::Color> color = std::nullopt) {
  Graph g(n);
  for (auto [u, v] : edges) {
    g.add_edge(u, v, color);
  }
  return g;
}

} // namespace oracle
