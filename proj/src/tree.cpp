#include "tdecomp/tree.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace tdecomp {

Tree::Tree(std::size_t k, std::vector<Edge> edges) : edges_(std::move(edges)), adjacency_(k) {
  if (k < 2) {
    throw TreeError("a tree needs at least two vertices");
  }
  if (edges_.size() != k - 1) {
    throw TreeError("a tree on " + std::to_string(k) + " vertices needs " + std::to_string(k - 1) +
                    " edges, got " + std::to_string(edges_.size()));
  }
  for (const auto& e : edges_) {
    if (e.u >= k || e.v >= k || e.u == e.v) {
      throw TreeError("invalid tree edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
  }
  // k-1 edges plus connectivity rules out cycles and parallel edges.
  std::vector<bool> seen(k, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != k) {
    throw TreeError("edges do not form a connected tree");
  }
}

Tree Tree::from_parents(const std::vector<Vertex>& parents) {
  std::vector<Edge> edges;
  edges.reserve(parents.size());
  for (std::size_t j = 0; j < parents.size(); ++j) {
    edges.push_back({parents[j], static_cast<Vertex>(j + 1)});
  }
  return Tree(parents.size() + 1, std::move(edges));
}

Tree Tree::path(std::size_t edges) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < edges; ++i) {
    es.push_back({i, i + 1});
  }
  return Tree(edges + 1, std::move(es));
}

Tree Tree::star(std::size_t leaves) {
  std::vector<Edge> es;
  for (Vertex i = 1; i <= leaves; ++i) {
    es.push_back({0, i});
  }
  return Tree(leaves + 1, std::move(es));
}

std::size_t Tree::max_degree() const {
  std::size_t d = 0;
  for (const auto& adj : adjacency_) {
    d = std::max(d, adj.size());
  }
  return d;
}

std::vector<Vertex> Tree::parent_array() const {
  std::vector<Vertex> parent(vertex_count(), 0);
  std::vector<bool> seen(vertex_count(), false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  return parent;
}

std::size_t Family::total_edges() const {
  std::size_t c = 0;
  for (const auto& t : trees) {
    c += t.edge_count();
  }
  return c;
}

std::vector<std::size_t> RootedTree::descendents(std::size_t slot) const {
  if (slot >= h()) {
    throw TreeError("slot out of range");
  }
  std::vector<bool> in(h(), false);
  in[slot] = true;
  std::vector<std::size_t> out{slot};
  for (std::size_t j = slot + 1; j < h(); ++j) {
    if (in[parent[j]]) {
      in[j] = true;
      out.push_back(j);
    }
  }
  return out;
}

std::vector<std::size_t> RootedTree::depth() const {
  std::vector<std::size_t> d(h(), 0);
  for (std::size_t i = 1; i < h(); ++i) {
    d[i] = d[parent[i]] + 1;
  }
  return d;
}

RootedTree root_at_leaf(const Tree& t, Vertex q) {
  if (q >= t.vertex_count() || !t.is_leaf(q)) {
    throw TreeError("root " + std::to_string(q) + " is not a leaf");
  }
  RootedTree rt{t, q, {}, {}};
  std::vector<std::size_t> entering(t.vertex_count(), no_parent);
  std::vector<bool> seen(t.vertex_count(), false);
  std::vector<Vertex> queue{q};
  seen[q] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex x = queue[head];
    for (Vertex y : t.neighbors(x)) {  // ascending
      if (seen[y]) {
        continue;
      }
      seen[y] = true;
      entering[y] = rt.arcs.size();
      rt.arcs.push_back({x, y});
      rt.parent.push_back(entering[x]);
      queue.push_back(y);
    }
  }
  return rt;
}

Vertex lowest_leaf(const Tree& t) {
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) {
      return v;
    }
  }
  throw TreeError("tree without leaves");
}

std::vector<Vertex> centroids(const Tree& t) {
  const auto k = t.vertex_count();
  auto parent = t.parent_array();
  // BFS order from 0, then accumulate subtree sizes in reverse.
  std::vector<Vertex> order{0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex w : t.neighbors(order[i])) {
      if (w != 0 && parent[w] == order[i]) {
        order.push_back(w);
      }
    }
  }
  std::vector<std::size_t> size(k, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != 0) {
      size[parent[*it]] += size[*it];
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < k; ++v) {
    std::size_t largest = k - size[v];
    for (Vertex w : t.neighbors(v)) {
      if (w != 0 && parent[w] == v) {
        largest = std::max(largest, size[w]);
      }
    }
    if (2 * largest <= k) {
      out.push_back(v);
    }
  }
  return out;
}

std::string rooted_code(const Tree& t, Vertex root) {
  const auto k = t.vertex_count();
  std::vector<Vertex> parent(k, root);
  std::vector<Vertex> order{root};
  std::vector<bool> seen(k, false);
  seen[root] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex w : t.neighbors(order[i])) {
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = order[i];
        order.push_back(w);
      }
    }
  }
  std::vector<std::vector<std::string>> child_codes(k);
  std::vector<std::string> code(k);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    auto& kids = child_codes[v];
    std::sort(kids.begin(), kids.end());
    std::string c = "(";
    for (const auto& s : kids) {
      c += s;
    }
    c += ")";
    kids.clear();
    if (v != root) {
      child_codes[parent[v]].push_back(std::move(c));
    } else {
      code[v] = std::move(c);
    }
  }
  return code[root];
}

Vertex canonical_centroid(const Tree& t) {
  auto cs = centroids(t);
  Vertex best = cs.front();
  std::string best_code = rooted_code(t, best);
  for (std::size_t i = 1; i < cs.size(); ++i) {
    auto c = rooted_code(t, cs[i]);
    if (c < best_code) {
      best_code = std::move(c);
      best = cs[i];
    }
  }
  return best;
}

std::string ahu_canonical(const Tree& t) {
  std::string best;
  for (Vertex c : centroids(t)) {
    auto code = rooted_code(t, c);
    if (best.empty() || code < best) {
      best = std::move(code);
    }
  }
  return best;
}

Concatenation concatenate(const std::vector<ConcatPart>& parts) {
  if (parts.empty()) {
    throw TreeError("concatenate: no parts");
  }
  Concatenation out{Tree::path(1), {}, {}, {}};
  std::vector<Edge> edges;
  Vertex next = 1;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& part = parts[p];
    Vertex attach = part.attach ? *part.attach : canonical_centroid(part.tree);
    if (attach >= part.tree.vertex_count()) {
      throw TreeError("concatenate: attach vertex outside its tree");
    }
    std::vector<Vertex> map(part.tree.vertex_count());
    for (Vertex v = 0; v < part.tree.vertex_count(); ++v) {
      map[v] = v == attach ? 0 : next++;
    }
    std::vector<std::size_t> mine;
    for (const auto& e : part.tree.edges()) {
      mine.push_back(edges.size());
      out.originator.push_back(p);
      edges.push_back({map[e.u], map[e.v]});
    }
    out.vertex_map.push_back(std::move(map));
    out.part_edges.push_back(std::move(mine));
  }
  out.tree = Tree(next, std::move(edges));
  return out;
}

std::optional<Tree> tree_from_host_edges(const std::vector<Edge>& edges) {
  if (edges.empty()) {
    return std::nullopt;
  }
  std::map<Vertex, Vertex> relabel;
  for (const auto& e : edges) {
    relabel.emplace(e.u, 0);
    relabel.emplace(e.v, 0);
  }
  if (relabel.size() != edges.size() + 1) {
    return std::nullopt;
  }
  Vertex next = 0;
  for (auto& [host, local] : relabel) {
    local = next++;
  }
  std::vector<Edge> local_edges;
  for (const auto& e : edges) {
    local_edges.push_back({relabel[e.u], relabel[e.v]});
  }
  try {
    return Tree(relabel.size(), std::move(local_edges));
  } catch (const TreeError&) {
    return std::nullopt;
  }
}

namespace {

struct EmbedPlan {
  Vertex root;
  std::vector<Vertex> order;                  // BFS order of tree vertices
  std::vector<std::vector<Vertex>> children;  // children sorted by subtree demand
  std::vector<std::size_t> edge_index;        // tree edge (parent(v), v) -> index in t.edges()
};

EmbedPlan plan_embedding(const Tree& t) {
  EmbedPlan plan;
  const auto k = t.vertex_count();
  plan.root = 0;
  for (Vertex v = 1; v < k; ++v) {
    if (t.degree(v) > t.degree(plan.root)) {
      plan.root = v;
    }
  }
  plan.children.assign(k, {});
  plan.edge_index.assign(k, 0);
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < t.edges().size(); ++i) {
    index[edge_key(t.edges()[i].u, t.edges()[i].v)] = i;
  }
  std::vector<bool> seen(k, false);
  seen[plan.root] = true;
  plan.order.push_back(plan.root);
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    Vertex x = plan.order[i];
    for (Vertex y : t.neighbors(x)) {
      if (!seen[y]) {
        seen[y] = true;
        plan.children[x].push_back(y);
        plan.edge_index[y] = index[edge_key(x, y)];
        plan.order.push_back(y);
      }
    }
    // Most demanding children pick their images first.
    std::stable_sort(plan.children[x].begin(), plan.children[x].end(),
                     [&](Vertex a, Vertex b) { return t.degree(a) > t.degree(b); });
  }
  return plan;
}

// usable[e]: edge may be used; allowed[v]: vertex may be used.
std::optional<std::vector<EdgeId>> embed_once(const Graph& g, const Tree& t, const EmbedPlan& plan,
                                              const EdgeMask& usable, Rng& rng) {
  auto avail_degree = [&](Vertex v) {
    std::size_t d = 0;
    for (const auto& inc : g.incident(v)) {
      d += usable[inc.edge] ? 1 : 0;
    }
    return d;
  };
  const auto k = t.vertex_count();
  std::vector<Vertex> image(k, 0);
  std::vector<EdgeId> host_edges(t.edge_count(), 0);
  std::vector<Vertex> used;  // host vertices taken, at most k
  auto taken = [&](Vertex v) { return std::find(used.begin(), used.end(), v) != used.end(); };

  // Root: random start, first vertex with enough available degree.
  const std::size_t need_root = t.degree(plan.root);
  std::optional<Vertex> root_image;
  const auto n = g.n();
  const auto offset = n == 0 ? 0 : rng.below(n);
  std::size_t best_degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = static_cast<Vertex>((offset + i) % n);
    if (g.degree(v) < need_root) {
      continue;
    }
    auto d = avail_degree(v);
    if (d >= need_root && d > best_degree) {
      root_image = v;
      best_degree = d;
      // A handful of probes is enough; take the best of the first few hits.
      if (d >= 2 * need_root + 2) {
        break;
      }
    }
  }
  if (!root_image) {
    return std::nullopt;
  }
  image[plan.root] = *root_image;
  used.push_back(*root_image);

  std::vector<std::pair<Vertex, EdgeId>> options;
  for (Vertex x : plan.order) {
    if (plan.children[x].empty()) {
      continue;
    }
    Vertex hx = image[x];
    options.clear();
    for (const auto& inc : g.incident(hx)) {
      if (usable[inc.edge] && !taken(inc.neighbor)) {
        options.emplace_back(inc.neighbor, inc.edge);
      }
    }
    rng.shuffle(options.begin(), options.end());
    for (Vertex c : plan.children[x]) {
      const std::size_t need = t.degree(c) - 1;
      std::size_t pick = options.size();
      if (need == 0) {
        for (std::size_t j = 0; j < options.size(); ++j) {
          if (!taken(options[j].first)) {
            pick = j;
            break;
          }
        }
      } else {
        // Largest available degree among the untaken options.
        std::size_t best = 0;
        for (std::size_t j = 0; j < options.size(); ++j) {
          if (taken(options[j].first)) {
            continue;
          }
          auto d = avail_degree(options[j].first);
          if (d >= need + 1 && d > best) {
            best = d;
            pick = j;
          }
        }
      }
      if (pick == options.size()) {
        return std::nullopt;
      }
      image[c] = options[pick].first;
      host_edges[plan.edge_index[c]] = options[pick].second;
      used.push_back(options[pick].first);
    }
  }
  return host_edges;
}

} // namespace

std::optional<std::vector<EdgeId>> embed_tree_within(const Graph& g, const Tree& t,
                                                     const EdgeMask& forbidden,
                                                     const std::vector<bool>& allowed, Rng& rng,
                                                     int attempts) {
  EdgeMask blocked(g.m(), false);
  EdgeMask open(g.m(), false);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    bool ok = !(e < forbidden.size() && forbidden[e]);
    if (!allowed.empty()) {
      ok = ok && allowed[ed.u] && allowed[ed.v];
    }
    open[e] = ok;
    blocked[e] = !ok;
  }
  auto plan = plan_embedding(t);
  std::optional<EdgeMask> core;
  for (int a = 0; a < attempts; ++a) {
    const EdgeMask* usable = &open;
    if (a % 2 == 0) {
      if (!core) {
        core = core_mask(g, t.edge_count(), blocked);
      }
      if (std::any_of(core->begin(), core->end(), [](bool b) { return b; })) {
        usable = &*core;
      }
    }
    if (auto r = embed_once(g, t, plan, *usable, rng)) {
      return r;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<EdgeId>> embed_tree(const Graph& g, const Tree& t,
                                              const EdgeMask& forbidden, Rng& rng, int attempts) {
  return embed_tree_within(g, t, forbidden, {}, rng, attempts);
}

Tree parse_tree_line(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tok;
  std::string s;
  while (ss >> s) {
    tok.push_back(s);
  }
  auto num = [](const std::string& x) -> std::uint64_t {
    if (x.empty() || x.find_first_not_of("0123456789") != std::string::npos) {
      throw TreeError("malformed tree line token '" + x + "'");
    }
    return std::stoull(x);
  };
  if (tok.empty()) {
    throw TreeError("empty tree line");
  }
  auto k = num(tok[0]);
  if (k < 2) {
    throw TreeError("tree must have at least two vertices");
  }
  if (tok.size() != k) {
    throw TreeError("tree line for k=" + std::to_string(k) + " needs " + std::to_string(k - 1) +
                    " parents");
  }
  std::vector<Vertex> parents;
  for (std::size_t j = 1; j < tok.size(); ++j) {
    auto p = num(tok[j]);
    if (p >= k) {
      throw TreeError("parent out of range in tree line");
    }
    parents.push_back(static_cast<Vertex>(p));
  }
  return Tree::from_parents(parents);
}

std::string format_tree_line(const Tree& t) {
  auto parent = t.parent_array();
  std::string out = std::to_string(t.vertex_count());
  for (std::size_t v = 1; v < t.vertex_count(); ++v) {
    out += ' ';
    out += std::to_string(parent[v]);
  }
  return out;
}

Family read_family(std::istream& in) {
  Family f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    f.trees.push_back(parse_tree_line(line));
  }
  if (f.trees.empty()) {
    throw TreeError("family file contains no trees");
  }
  return f;
}

Family read_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw TreeError("cannot open family file " + path);
  }
  return read_family(in);
}

void write_family(std::ostream& out, const Family& family) {
  for (const auto& t : family.trees) {
    out << format_tree_line(t) << '\n';
  }
}

} // namespace tdecomp
