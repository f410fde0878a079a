#include "tdecomp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tdecomp {

std::uint64_t edge_key(Vertex u, Vertex v) {
  if (u > v) {
    std::swap(u, v);
  }
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

Graph::Graph(std::size_t n) : adjacency_(n) {}

EdgeId Graph::add_edge(Vertex u, Vertex v, std::optional<Color> color) {
  if (u >= n() || v >= n()) {
    throw GraphError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
  }
  if (u == v) {
    throw GraphError("self-loop at vertex " + std::to_string(u));
  }
  if (!edges_.empty() && color.has_value() != colored()) {
    throw GraphError("graph mixes colored and uncolored edges");
  }
  auto [it, inserted] = index_.emplace(edge_key(u, v), static_cast<EdgeId>(edges_.size()));
  if (!inserted) {
    throw GraphError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
  }
  auto id = it->second;
  edges_.push_back({u, v});
  if (color) {
    colors_.push_back(*color);
  }
  adjacency_[u].push_back({v, id});
  adjacency_[v].push_back({u, id});
  return id;
}

Color Graph::color(EdgeId e) const {
  if (!colored()) {
    throw GraphError("graph is not colored");
  }
  return colors_[e];
}

std::size_t Graph::degree(Vertex v, Color c) const {
  std::size_t d = 0;
  for (const auto& inc : adjacency_[v]) {
    d += colors_[inc.edge] == c ? 1 : 0;
  }
  return d;
}

std::optional<EdgeId> Graph::find_edge(Vertex u, Vertex v) const {
  auto it = index_.find(edge_key(u, v));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& adj : adjacency_) {
    d = std::max(d, adj.size());
  }
  return d;
}

std::size_t Graph::min_degree() const {
  if (adjacency_.empty()) {
    return 0;
  }
  std::size_t d = std::numeric_limits<std::size_t>::max();
  for (const auto& adj : adjacency_) {
    d = std::min(d, adj.size());
  }
  return d;
}

Graph Graph::subgraph(const EdgeMask& keep) const {
  Graph out(n());
  for (EdgeId e = 0; e < m(); ++e) {
    if (e < keep.size() && keep[e]) {
      out.add_edge(edges_[e].u, edges_[e].v,
                   colored() ? std::optional<Color>(colors_[e]) : std::nullopt);
    }
  }
  return out;
}

Graph Graph::color_class(Color c) const {
  EdgeMask keep(m(), false);
  for (EdgeId e = 0; e < m(); ++e) {
    keep[e] = color(e) == c;
  }
  return subgraph(keep);
}

namespace {

// Calls emit for each selected pair (u, v), u < v, in lexicographic order.
// Gaps between selected pairs are geometric, so the cost is O(n + m).
template <class Emit>
void sample_pairs(std::size_t n, double p, Rng& rng, Emit emit) {
  if (n < 2 || p <= 0.0) {
    return;
  }
  if (p >= 1.0) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        emit(u, v);
      }
    }
    return;
  }
  // Enumerates column-major (w < v), then sorts into row-major order.
  std::vector<std::pair<Vertex, Vertex>> pairs;
  const double log_q = std::log1p(-p);
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < nn) {
    double r = 1.0 - rng.uniform();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log(r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) {
      pairs.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto [a, b] : pairs) {
    emit(a, b);
  }
}

} // namespace

Graph gen_gnp(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("gen_gnp: p must lie in [0, 1]");
  }
  Graph g(n);
  sample_pairs(n, p, rng, [&](Vertex u, Vertex v) { g.add_edge(u, v); });
  return g;
}

Graph gen_colored_gnp(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("gen_colored_gnp: p must lie in [0, 1]");
  }
  Graph g(n);
  // Present with probability p, then red given present with probability 1/15.
  sample_pairs(n, p, rng, [&](Vertex u, Vertex v) {
    g.add_edge(u, v, rng.bernoulli(1.0 / 15.0) ? Color::red : Color::blue);
  });
  return g;
}

Graph color_randomly(const Graph& g, double red_share, Rng& rng) {
  Graph out(g.n());
  for (const auto& e : g.edges()) {
    out.add_edge(e.u, e.v, rng.bernoulli(red_share) ? Color::red : Color::blue);
  }
  return out;
}

namespace {

std::vector<bool> membership(const Graph& g, const VertexSubset& x) {
  std::vector<bool> in(g.n(), false);
  for (auto v : x.members) {
    if (v >= g.n()) {
      throw std::invalid_argument("vertex subset member out of range");
    }
    in[v] = true;
  }
  return in;
}

bool passes(const Graph& g, EdgeId e, std::optional<Color> filter) {
  return !filter || g.color(e) == *filter;
}

} // namespace

std::size_t out_count(const Graph& g, const VertexSubset& x, std::optional<Color> color_filter) {
  if (x.members.empty()) {
    throw std::invalid_argument("out_count: empty vertex subset");
  }
  auto in = membership(g, x);
  std::size_t count = 0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (in[ed.u] != in[ed.v] && passes(g, e, color_filter)) {
      ++count;
    }
  }
  return count;
}

std::size_t in_count(const Graph& g, const VertexSubset& x, std::optional<Color> color_filter) {
  auto in = membership(g, x);
  std::size_t count = 0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (in[ed.u] && in[ed.v] && passes(g, e, color_filter)) {
      ++count;
    }
  }
  return count;
}

EdgeMask core_mask(const Graph& g, std::size_t d, const EdgeMask& forbidden) {
  EdgeMask alive(g.m(), true);
  std::vector<std::size_t> deg(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (e < forbidden.size() && forbidden[e]) {
      alive[e] = false;
      continue;
    }
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  std::vector<bool> removed(g.n(), false);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (deg[v] < d) {
      removed[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    Vertex v = queue.back();
    queue.pop_back();
    for (const auto& inc : g.incident(v)) {
      if (!alive[inc.edge]) {
        continue;
      }
      alive[inc.edge] = false;
      Vertex w = inc.neighbor;
      --deg[w];
      if (!removed[w] && deg[w] < d) {
        removed[w] = true;
        queue.push_back(w);
      }
    }
  }
  return alive;
}

Graph peel_to_min_degree(const Graph& g, std::size_t d, const EdgeMask& forbidden) {
  return g.subgraph(core_mask(g, d, forbidden));
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) {
    out.push_back(t);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw GraphError(std::string("malformed ") + what + ": '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw GraphError(std::string("malformed ") + what + ": '" + s + "'");
  }
}

} // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw GraphError("missing graph header");
  }
  auto head = tokens(line);
  if (head.size() != 2) {
    throw GraphError("graph header must be 'n m'");
  }
  auto n = parse_uint(head[0], "vertex count");
  auto m = parse_uint(head[1], "edge count");
  if (n > std::numeric_limits<Vertex>::max()) {
    throw GraphError("vertex count too large");
  }
  Graph g(n);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!std::getline(in, line)) {
      throw GraphError("expected " + std::to_string(m) + " edge lines, got " + std::to_string(i));
    }
    auto t = tokens(line);
    if (t.size() != 2 && t.size() != 3) {
      throw GraphError("edge line must be 'u v [r|b]': '" + line + "'");
    }
    auto u = parse_uint(t[0], "vertex id");
    auto v = parse_uint(t[1], "vertex id");
    if (u >= n || v >= n) {
      throw GraphError("edge endpoint out of range: '" + line + "'");
    }
    std::optional<Color> color;
    if (t.size() == 3) {
      if (t[2] == "r") {
        color = Color::red;
      } else if (t[2] == "b") {
        color = Color::blue;
      } else {
        throw GraphError("edge color must be r or b: '" + line + "'");
      }
    }
    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), color);
  }
  while (std::getline(in, line)) {
    if (!tokens(line).empty()) {
      throw GraphError("trailing content after " + std::to_string(m) + " edges");
    }
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    out << ed.u << ' ' << ed.v;
    if (g.colored()) {
      out << ' ' << (g.color(e) == Color::red ? 'r' : 'b');
    }
    out << '\n';
  }
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot open graph file " + path);
  }
  return read_graph(in);
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) {
    throw GraphError("cannot write graph file " + path);
  }
  write_graph(out, g);
}

} // namespace tdecomp
