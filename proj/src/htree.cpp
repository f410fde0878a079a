#include "tdecomp/htree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tdecomp/matching.hpp"

namespace tdecomp {

namespace {

struct WalkStep {
  std::size_t edge;  // index into the local edge list; >= real count means virtual
  bool forward;      // traversed u -> v
};

// Euler circuits of the multigraph (n, edges) after pairing odd-degree
// vertices with virtual edges. Every edge appears in exactly one circuit.
std::vector<std::vector<WalkStep>> euler_circuits(std::size_t n,
                                                  std::vector<std::pair<Vertex, Vertex>> edges,
                                                  Rng* rng) {
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::vector<Vertex> odd;
  for (Vertex v = 0; v < n; ++v) {
    if (deg[v] % 2 == 1) {
      odd.push_back(v);
    }
  }
  if (rng) {
    rng->shuffle(odd.begin(), odd.end());
  }
  for (std::size_t i = 0; i + 1 < odd.size(); i += 2) {
    edges.emplace_back(odd[i], odd[i + 1]);
  }
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back(e);
    adj[edges[e].second].push_back(e);
  }
  if (rng) {
    for (auto& a : adj) {
      rng->shuffle(a.begin(), a.end());
    }
  }
  std::vector<char> used(edges.size(), 0);
  std::vector<std::size_t> ptr(n, 0);
  std::vector<std::vector<WalkStep>> circuits;
  std::vector<Vertex> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  if (rng) {
    rng->shuffle(starts.begin(), starts.end());
  }
  struct Frame {
    Vertex v;
    WalkStep via;
    bool has_via;
  };
  std::vector<Frame> stack;
  for (Vertex s : starts) {
    while (ptr[s] < adj[s].size() && used[adj[s][ptr[s]]]) {
      ++ptr[s];
    }
    if (ptr[s] == adj[s].size()) {
      continue;
    }
    std::vector<WalkStep> circuit;
    stack.clear();
    stack.push_back({s, {0, true}, false});
    while (!stack.empty()) {
      Vertex v = stack.back().v;
      while (ptr[v] < adj[v].size() && used[adj[v][ptr[v]]]) {
        ++ptr[v];
      }
      if (ptr[v] < adj[v].size()) {
        auto e = adj[v][ptr[v]];
        used[e] = 1;
        bool forward = edges[e].first == v;
        Vertex w = forward ? edges[e].second : edges[e].first;
        stack.push_back({w, {e, forward}, true});
      } else {
        if (stack.back().has_via) {
          circuit.push_back(stack.back().via);
        }
        stack.pop_back();
      }
    }
    std::reverse(circuit.begin(), circuit.end());
    circuits.push_back(std::move(circuit));
  }
  return circuits;
}

double balance_objective(const std::vector<std::size_t>& di, const std::vector<std::size_t>& dj,
                         const Graph& g, double h) {
  double s = 0.0;
  for (Vertex v = 0; v < g.n(); ++v) {
    double target = static_cast<double>(g.degree(v)) / h;
    s += std::pow(static_cast<double>(di[v]) - target, 2) +
         std::pow(static_cast<double>(dj[v]) - target, 2);
  }
  return s;
}

// Re-splits E_a u E_b along Euler circuits so that d_a(v) and d_b(v) differ by
// at most two at every vertex, keeping both classes at exactly m edges. Kept
// only if the squared deviation from d(v)/h does not grow.
void euler_rebalance(const Graph& g, FeasiblePartition& p, std::size_t a, std::size_t b,
                     Rng& rng) {
  std::vector<EdgeId> pool = p.classes[a];
  pool.insert(pool.end(), p.classes[b].begin(), p.classes[b].end());
  std::vector<std::pair<Vertex, Vertex>> local;
  local.reserve(pool.size());
  for (auto e : pool) {
    local.emplace_back(g.edge(e).u, g.edge(e).v);
  }
  auto circuits = euler_circuits(g.n(), local, &rng);
  std::vector<EdgeId> to_a;
  std::vector<EdgeId> to_b;
  // Odd circuits alternate which class receives the extra edge.
  bool odd_goes_a = rng.bernoulli(0.5);
  for (const auto& c : circuits) {
    std::vector<EdgeId> real;
    for (const auto& s : c) {
      if (s.edge < pool.size()) {
        real.push_back(pool[s.edge]);
      }
    }
    bool first_a = true;
    if (real.size() % 2 == 1) {
      first_a = odd_goes_a;
      odd_goes_a = !odd_goes_a;
    } else {
      first_a = rng.bernoulli(0.5);
    }
    for (std::size_t k = 0; k < real.size(); ++k) {
      bool to_first = (k % 2 == 0) == first_a;
      (to_first ? to_a : to_b).push_back(real[k]);
    }
  }
  if (to_a.size() != p.m || to_b.size() != p.m) {
    return;  // odd circuit count mismatch cannot happen for 2m edges; keep old split
  }
  std::vector<std::size_t> da(g.n(), 0);
  std::vector<std::size_t> db(g.n(), 0);
  for (auto e : to_a) {
    ++da[g.edge(e).u];
    ++da[g.edge(e).v];
  }
  for (auto e : to_b) {
    ++db[g.edge(e).u];
    ++db[g.edge(e).v];
  }
  double h = static_cast<double>(p.h);
  if (balance_objective(da, db, g, h) > balance_objective(p.degree[a], p.degree[b], g, h)) {
    return;
  }
  p.classes[a] = std::move(to_a);
  p.classes[b] = std::move(to_b);
  p.degree[a] = std::move(da);
  p.degree[b] = std::move(db);
  for (auto e : p.classes[a]) {
    p.class_of[e] = a;
  }
  for (auto e : p.classes[b]) {
    p.class_of[e] = b;
  }
}

void compute_partition_stats(const Graph& g, FeasiblePartition& p) {
  p.degree.assign(p.h, std::vector<std::size_t>(g.n(), 0));
  for (std::size_t i = 0; i < p.h; ++i) {
    for (auto e : p.classes[i]) {
      ++p.degree[i][g.edge(e).u];
      ++p.degree[i][g.edge(e).v];
    }
  }
}

void compute_balance(const Graph& g, FeasiblePartition& p) {
  const double h = static_cast<double>(p.h);
  p.max_balance_ratio = 0.0;
  p.max_balance_deviation = 0.0;
  for (std::size_t i = 0; i < p.h; ++i) {
    for (Vertex v = 0; v < g.n(); ++v) {
      double d = static_cast<double>(g.degree(v));
      if (d == 0) {
        continue;
      }
      double dev = std::abs(static_cast<double>(p.degree[i][v]) - d / h);
      p.max_balance_deviation = std::max(p.max_balance_deviation, dev);
      p.max_balance_ratio = std::max(p.max_balance_ratio, dev / (d / (h * h)));
    }
  }
}

} // namespace

FeasiblePartition feasible_partition(const Graph& g, std::size_t h, const PartitionOptions& options,
                                     Rng& rng) {
  if (h == 0 || g.m() % h != 0) {
    throw std::invalid_argument("feasible_partition: e(G) = " + std::to_string(g.m()) +
                                " is not divisible by h = " + std::to_string(h));
  }
  const std::size_t m = g.m() / h;
  const double beta = g.n() > 0 ? 1.0 / std::sqrt(static_cast<double>(g.n())) : 0.0;
  for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
    FeasiblePartition p;
    p.h = h;
    p.m = m;
    p.attempts = attempt;
    p.classes.assign(h, {});
    p.class_of.assign(g.m(), 0);
    std::vector<EdgeId> zero;
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (rng.bernoulli(beta)) {
        zero.push_back(e);
      } else {
        p.classes[rng.below(h)].push_back(e);
      }
    }
    if (std::any_of(p.classes.begin(), p.classes.end(),
                    [&](const auto& c) { return c.size() > m; })) {
      continue;
    }
    rng.shuffle(zero.begin(), zero.end());
    std::size_t next = 0;
    for (auto& c : p.classes) {
      while (c.size() < m) {
        c.push_back(zero[next++]);
      }
    }
    for (std::size_t i = 0; i < h; ++i) {
      for (auto e : p.classes[i]) {
        p.class_of[e] = i;
      }
    }
    compute_partition_stats(g, p);
    if (options.mode == Mode::relaxed && h > 1) {
      for (std::size_t round = 0; round < options.rebalance_rounds; ++round) {
        for (std::size_t a = 0; a < h; ++a) {
          for (std::size_t b = a + 1; b < h; ++b) {
            euler_rebalance(g, p, a, b, rng);
          }
        }
      }
    }
    compute_balance(g, p);
    if (options.mode == Mode::strict && p.max_balance_ratio > options.epsilon) {
      continue;
    }
    return p;
  }
  throw PartitionFailed("no feasible partition after " + std::to_string(options.max_attempts) +
                        " attempts");
}

std::vector<DirectedEdge> eulerian_orientation(const Graph& g, const std::vector<EdgeId>& edges,
                                               Rng* rng) {
  std::vector<std::pair<Vertex, Vertex>> local;
  local.reserve(edges.size());
  for (auto e : edges) {
    local.emplace_back(g.edge(e).u, g.edge(e).v);
  }
  auto circuits = euler_circuits(g.n(), local, rng);
  std::vector<DirectedEdge> out;
  out.reserve(edges.size());
  for (const auto& c : circuits) {
    for (const auto& s : c) {
      if (s.edge >= edges.size()) {
        continue;
      }
      auto [u, v] = local[s.edge];
      out.push_back(s.forward ? DirectedEdge{u, v, edges[s.edge]} : DirectedEdge{v, u, edges[s.edge]});
    }
  }
  return out;
}

FeasibleOrientation feasible_orientation(const Graph& g, const FeasiblePartition& partition,
                                         const RootedTree& rooted, Rng& rng) {
  const std::size_t h = rooted.h();
  if (partition.h != h) {
    throw std::invalid_argument("feasible_orientation: partition has " +
                                std::to_string(partition.h) + " classes, tree has " +
                                std::to_string(h) + " edges");
  }
  const std::size_t n = g.n();
  FeasibleOrientation o;
  o.n = n;
  o.arcs.assign(h, {});
  o.out_deg.assign(h, std::vector<std::size_t>(n, 0));
  o.in_deg.assign(h, std::vector<std::size_t>(n, 0));
  auto tally = [&](std::size_t i) {
    for (const auto& a : o.arcs[i]) {
      ++o.out_deg[i][a.tail];
      ++o.in_deg[i][a.head];
    }
  };
  o.arcs[0] = eulerian_orientation(g, partition.classes[0], &rng);
  tally(0);
  for (std::size_t i = 1; i < h; ++i) {
    const auto& target = o.in_deg[rooted.parent[i]];  // c_v
    const auto& edges = partition.classes[i];
    std::vector<std::size_t> first_copy(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
      first_copy[v + 1] = first_copy[v] + target[v];
      if (target[v] > partition.degree[i][v]) {
        throw OrientationFailed("slot " + std::to_string(i) + ": vertex " + std::to_string(v) +
                                " must emit " + std::to_string(target[v]) + " arcs but has degree " +
                                std::to_string(partition.degree[i][v]));
      }
    }
    if (first_copy[n] != edges.size()) {
      throw std::logic_error("feasible_orientation: sum of c_v differs from m");
    }
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    std::vector<std::vector<std::size_t>> adjacency(edges.size());
    for (std::size_t l = 0; l < edges.size(); ++l) {
      const auto& ed = g.edge(edges[order[l]]);
      auto& adj = adjacency[l];
      for (auto x : {ed.u, ed.v}) {
        for (auto c = first_copy[x]; c < first_copy[x + 1]; ++c) {
          adj.push_back(c);
        }
      }
      rng.shuffle(adj.begin(), adj.end());
    }
    auto match = max_bipartite_matching(first_copy[n], adjacency);
    std::size_t matched = 0;
    std::vector<Vertex> owner(first_copy[n]);
    for (Vertex v = 0; v < n; ++v) {
      for (auto c = first_copy[v]; c < first_copy[v + 1]; ++c) {
        owner[c] = v;
      }
    }
    o.arcs[i].reserve(edges.size());
    for (std::size_t l = 0; l < edges.size(); ++l) {
      if (match[l] == unmatched) {
        continue;
      }
      ++matched;
      EdgeId e = edges[order[l]];
      Vertex tail = owner[match[l]];
      o.arcs[i].push_back({tail, g.edge(e).other(tail), e});
    }
    if (matched != edges.size()) {
      throw OrientationFailed("slot " + std::to_string(i) + ": matching covers " +
                              std::to_string(matched) + " of " + std::to_string(edges.size()) +
                              " edges (Hall violation)");
    }
    // Restore partition order for reproducible downstream indexing.
    std::sort(o.arcs[i].begin(), o.arcs[i].end(),
              [](const DirectedEdge& a, const DirectedEdge& b) { return a.edge < b.edge; });
    tally(i);
    for (Vertex v = 0; v < n; ++v) {
      if (o.out_deg[i][v] != target[v]) {
        throw std::logic_error("feasible_orientation: d+_i(v) != d-_{p(i)}(v)");
      }
    }
  }
  return o;
}

std::size_t ClassSet::bad_count() const {
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), std::uint8_t{1}));
}

std::size_t ClassSet::bad_count(std::size_t c) const {
  return static_cast<std::size_t>(
      std::count(bad.begin() + static_cast<std::ptrdiff_t>(c * h),
                 bad.begin() + static_cast<std::ptrdiff_t>((c + 1) * h), std::uint8_t{1}));
}

std::size_t ClassSet::vertex_count(std::size_t c) const {
  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < h; ++i) {
    vs.push_back(at(c, i).tail);
    vs.push_back(at(c, i).head);
  }
  std::sort(vs.begin(), vs.end());
  return static_cast<std::size_t>(std::unique(vs.begin(), vs.end()) - vs.begin());
}

void refresh_bad(ClassSet& cs, std::size_t c) {
  // h is small; a linear scan over the seen vertices is the cheapest set.
  Vertex seen[64];
  std::vector<Vertex> overflow;
  std::size_t count = 0;
  auto contains = [&](Vertex x) {
    for (std::size_t k = 0; k < std::min<std::size_t>(count, 64); ++k) {
      if (seen[k] == x) {
        return true;
      }
    }
    return std::find(overflow.begin(), overflow.end(), x) != overflow.end();
  };
  auto add = [&](Vertex x) {
    if (count < 64) {
      seen[count] = x;
    } else {
      overflow.push_back(x);
    }
    ++count;
  };
  add(cs.at(c, 0).tail);
  for (std::size_t i = 0; i < cs.h; ++i) {
    Vertex head = cs.at(c, i).head;
    bool is_bad = contains(head);
    cs.bad[c * cs.h + i] = is_bad ? 1 : 0;
    if (!is_bad) {
      add(head);
    }
  }
}

ClassSet build_class_set(const FeasibleOrientation& orientation, const RootedTree& rooted,
                         Rng& rng) {
  const std::size_t h = rooted.h();
  const std::size_t n = orientation.n;
  ClassSet cs;
  cs.h = h;
  cs.m = orientation.arcs[0].size();
  const std::size_t m = cs.m;
  // next_of[i][k] = index in arcs[i] matched to arc k of slot parent[i].
  std::vector<std::vector<std::size_t>> next_of(h);
  for (std::size_t i = 1; i < h; ++i) {
    const auto p = rooted.parent[i];
    std::vector<std::vector<std::size_t>> in_at(n);
    std::vector<std::vector<std::size_t>> out_at(n);
    for (std::size_t k = 0; k < orientation.arcs[p].size(); ++k) {
      in_at[orientation.arcs[p][k].head].push_back(k);
    }
    for (std::size_t k = 0; k < orientation.arcs[i].size(); ++k) {
      out_at[orientation.arcs[i][k].tail].push_back(k);
    }
    next_of[i].assign(orientation.arcs[p].size(), 0);
    for (Vertex v = 0; v < n; ++v) {
      if (in_at[v].size() != out_at[v].size()) {
        throw std::logic_error("build_class_set: orientation is not feasible at vertex " +
                               std::to_string(v));
      }
      rng.shuffle(out_at[v].begin(), out_at[v].end());
      for (std::size_t k = 0; k < in_at[v].size(); ++k) {
        next_of[i][in_at[v][k]] = out_at[v][k];
      }
    }
  }
  cs.members.resize(m * h);
  cs.bad.assign(m * h, 0);
  std::vector<std::size_t> idx(h);
  for (std::size_t c = 0; c < m; ++c) {
    idx[0] = c;
    cs.members[c * h] = orientation.arcs[0][c];
    for (std::size_t i = 1; i < h; ++i) {
      idx[i] = next_of[i][idx[rooted.parent[i]]];
      cs.members[c * h + i] = orientation.arcs[i][idx[i]];
    }
    refresh_bad(cs, c);
  }
  return cs;
}

namespace {

Vertex position_vertex(const ClassSet& cs, std::size_t c, std::size_t pos) {
  return pos == 0 ? cs.at(c, 0).tail : cs.at(c, pos - 1).head;
}

} // namespace

std::size_t n_count(const ClassSet& cs, Vertex v, std::size_t i, std::size_t j) {
  std::size_t count = 0;
  for (std::size_t c = 0; c < cs.m; ++c) {
    if (cs.at(c, i).tail == v && cs.is_bad(c, j)) {
      ++count;
    }
  }
  return count;
}

std::size_t l_count(const ClassSet& cs, Vertex u, std::size_t j, Vertex v, std::size_t i) {
  if (j >= i) {
    throw std::invalid_argument("l_count requires j < i");
  }
  std::size_t count = 0;
  for (std::size_t c = 0; c < cs.m; ++c) {
    if (position_vertex(cs, c, i) == v && position_vertex(cs, c, j) == u) {
      ++count;
    }
  }
  return count;
}

ClassSetDiagnostics diagnostics(const ClassSet& cs, std::size_t n, std::size_t l_limit) {
  ClassSetDiagnostics d;
  const std::uint64_t h = cs.h;
  std::unordered_map<std::uint64_t, std::size_t> n_counts;
  for (std::size_t c = 0; c < cs.m; ++c) {
    for (std::size_t j = 0; j < cs.h; ++j) {
      if (!cs.is_bad(c, j)) {
        continue;
      }
      for (std::size_t i = 0; i <= j; ++i) {
        std::uint64_t key = (static_cast<std::uint64_t>(cs.at(c, i).tail) * h + i) * h + j;
        d.max_n = std::max(d.max_n, ++n_counts[key]);
      }
    }
  }
  if (n <= l_limit) {
    d.l_computed = true;
    const std::uint64_t positions = h + 1;
    std::unordered_map<std::uint64_t, std::size_t> l_counts;
    for (std::size_t c = 0; c < cs.m; ++c) {
      for (std::size_t i = 1; i <= cs.h; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          std::uint64_t key = ((static_cast<std::uint64_t>(position_vertex(cs, c, j)) * positions + j) *
                                   (n + 1) +
                               position_vertex(cs, c, i)) *
                                  positions +
                              i;
          d.max_l = std::max(d.max_l, ++l_counts[key]);
        }
      }
    }
  }
  return d;
}

namespace {

class Mender {
public:
  Mender(ClassSet& cs, const RootedTree& rooted, const MendOptions& options, Rng& rng,
         MendStats& stats)
      : cs_(cs), rooted_(rooted), options_(options), rng_(rng), stats_(stats), h_(cs.h) {
    for (std::size_t i = 0; i < h_; ++i) {
      desc_.push_back(rooted.descendents(i));
    }
    color_.resize(cs_.m);
    for (auto& c : color_) {
      c = rng_.below(h_);
    }
    in_l1_.assign(cs_.m, 1);
    tail_index_.assign(h_, {});
    bad_by_slot_.assign(h_, {});
    for (std::size_t c = 0; c < cs_.m; ++c) {
      for (std::size_t i = 0; i < h_; ++i) {
        tail_index_[i][cs_.at(c, i).tail].push_back(c);
        if (cs_.is_bad(c, i)) {
          bad_by_slot_[i].insert(c);
        }
      }
    }
    // c(v, i) >= d+_i(v) / (h + 1), measured only.
    for (std::size_t i = 0; i < h_; ++i) {
      for (const auto& [v, members] : tail_index_[i]) {
        std::size_t colored = 0;
        for (auto c : members) {
          colored += color_[c] == i ? 1 : 0;
        }
        if (colored * (h_ + 1) < members.size()) {
          ++stats_.eq10_violations;
        }
      }
    }
    total_ = cs_.bad_count();
  }

  void run() {
    stats_.initial_bad = total_;
    stats_.bad_trace.push_back(total_);
    const std::size_t budget = total_;
    while (total_ > 0) {
      if (stats_.swaps >= budget) {
        throw std::logic_error("mend: iteration budget exceeded despite strict decrease");
      }
      if (!step()) {
        throw MendStuck("no valid partner for " + std::to_string(total_) + " remaining bad arcs");
      }
    }
  }

private:
  bool step() {
    for (std::size_t i = h_; i-- > 0;) {
      if (bad_by_slot_[i].empty()) {
        continue;
      }
      std::vector<std::size_t> alphas(bad_by_slot_[i].begin(), bad_by_slot_[i].end());
      rng_.shuffle(alphas.begin(), alphas.end());
      for (auto alpha : alphas) {
        if (try_move(alpha, i)) {
          return true;
        }
      }
      if (options_.mode == Mode::strict) {
        return false;  // only the largest bad slot is eligible
      }
    }
    return false;
  }

  std::vector<Vertex> vertices_except(std::size_t c, Vertex v) const {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < h_; ++i) {
      for (auto x : {cs_.at(c, i).tail, cs_.at(c, i).head}) {
        if (x != v && std::find(out.begin(), out.end(), x) == out.end()) {
          out.push_back(x);
        }
      }
    }
    return out;
  }

  bool shares_vertex(std::size_t c, const std::vector<Vertex>& avoid) const {
    for (std::size_t i = 0; i < h_; ++i) {
      const auto& a = cs_.at(c, i);
      if (std::find(avoid.begin(), avoid.end(), a.tail) != avoid.end() ||
          std::find(avoid.begin(), avoid.end(), a.head) != avoid.end()) {
        return true;
      }
    }
    return false;
  }

  std::vector<std::size_t> candidates(std::size_t alpha, std::size_t slot) {
    auto it = tail_index_[slot].find(cs_.at(alpha, slot).tail);
    std::vector<std::size_t> out;
    for (auto c : it->second) {
      if (c != alpha) {
        out.push_back(c);
      }
    }
    rng_.shuffle(out.begin(), out.end());
    return out;
  }

  bool try_move(std::size_t alpha, std::size_t i) {
    const Vertex v = cs_.at(alpha, i).tail;
    const auto avoid = vertices_except(alpha, v);
    auto cands = candidates(alpha, i);
    for (auto beta : cands) {
      if (in_l1_[beta] && color_[beta] == i && !shares_vertex(beta, avoid)) {
        accept(alpha, beta, i);
        ++stats_.strict_swaps;
        return true;
      }
    }
    if (options_.mode == Mode::strict) {
      return false;
    }
    for (auto beta : cands) {
      if (!shares_vertex(beta, avoid)) {
        accept(alpha, beta, i);
        ++stats_.disjoint_swaps;
        return true;
      }
    }
    // Slot i and its ancestors (slot 0 would swap the whole member).
    for (std::size_t k = i; k > 0; k = rooted_.parent[k]) {
      for (auto beta : candidates(alpha, k)) {
        std::size_t before = cs_.bad_count(alpha) + cs_.bad_count(beta);
        swap_subtrees(alpha, beta, k);
        std::size_t after = cs_.bad_count(alpha) + cs_.bad_count(beta);
        if (after < before) {
          commit(alpha, beta, before, after);
          ++stats_.local_swaps;
          return true;
        }
        swap_subtrees(alpha, beta, k);
      }
    }
    return false;
  }

  void accept(std::size_t alpha, std::size_t beta, std::size_t i) {
    std::size_t before = cs_.bad_count(alpha) + cs_.bad_count(beta);
    swap_subtrees(alpha, beta, i);
    std::size_t after = cs_.bad_count(alpha) + cs_.bad_count(beta);
    if (after >= before) {
      throw std::logic_error("mend: vertex-disjoint swap did not lower the bad count");
    }
    commit(alpha, beta, before, after);
  }

  void commit(std::size_t alpha, std::size_t beta, std::size_t before, std::size_t after) {
    in_l1_[alpha] = 0;
    in_l1_[beta] = 0;
    total_ = total_ - before + after;
    ++stats_.swaps;
    stats_.bad_trace.push_back(total_);
    for (auto c : {alpha, beta}) {
      for (std::size_t j = 0; j < h_; ++j) {
        if (cs_.is_bad(c, j)) {
          bad_by_slot_[j].insert(c);
        } else {
          bad_by_slot_[j].erase(c);
        }
      }
    }
  }

  // Exchanges the arcs of all descendent slots of i; refreshes bad flags.
  void swap_subtrees(std::size_t alpha, std::size_t beta, std::size_t i) {
    for (auto j : desc_[i]) {
      auto& a = cs_.members[alpha * h_ + j];
      auto& b = cs_.members[beta * h_ + j];
      if (a.tail != b.tail) {
        replace(tail_index_[j][a.tail], alpha, beta);
        replace(tail_index_[j][b.tail], beta, alpha);
      }
      std::swap(a, b);
    }
    refresh_bad(cs_, alpha);
    refresh_bad(cs_, beta);
  }

  static void replace(std::vector<std::size_t>& list, std::size_t from, std::size_t to) {
    auto it = std::find(list.begin(), list.end(), from);
    if (it != list.end()) {
      *it = to;
    }
  }

  ClassSet& cs_;
  const RootedTree& rooted_;
  const MendOptions& options_;
  Rng& rng_;
  MendStats& stats_;
  std::size_t h_;
  std::vector<std::vector<std::size_t>> desc_;
  std::vector<std::size_t> color_;
  std::vector<std::uint8_t> in_l1_;
  std::vector<std::unordered_map<Vertex, std::vector<std::size_t>>> tail_index_;
  std::vector<std::set<std::size_t>> bad_by_slot_;
  std::size_t total_ = 0;
};

} // namespace

ClassSet mend(ClassSet cs, const RootedTree& rooted, const MendOptions& options, Rng& rng,
              MendStats* stats) {
  MendStats local;
  MendStats& s = stats ? *stats : local;
  s = MendStats{};
  if (cs.bad_count() == 0) {
    s.bad_trace.push_back(0);
    return cs;
  }
  Mender mender(cs, rooted, options, rng, s);
  mender.run();
  return cs;
}

namespace {

std::vector<std::size_t> slot_edges(const RootedTree& rt) {
  std::vector<std::size_t> out;
  for (const auto& a : rt.arcs) {
    const auto& es = rt.base.edges();
    for (std::size_t k = 0; k < es.size(); ++k) {
      if ((es[k].u == a.tail && es[k].v == a.head) || (es[k].v == a.tail && es[k].u == a.head)) {
        out.push_back(k);
        break;
      }
    }
  }
  return out;
}

} // namespace

HDecomposition decompose_H(const Graph& g, const Tree& H, const HParams& params, Rng& rng) {
  const std::size_t h = H.edge_count();
  if (g.m() % h != 0) {
    throw std::invalid_argument("decompose_H: e(G) = " + std::to_string(g.m()) +
                                " is not divisible by e(H) = " + std::to_string(h));
  }
  HDecomposition out{root_at_leaf(H, lowest_leaf(H)), {}, {}, {}, 0, {}, 0.0, {}};
  out.slot_edge = slot_edges(out.rooted);
  auto trace = [&](const std::string& stage, std::size_t attempt, bool ok,
                   const std::string& detail) {
    if (params.trace) {
      params.trace("stage=" + stage + " attempt=" + std::to_string(attempt) +
                   " status=" + (ok ? "ok" : "fail") + " detail=" + detail);
    }
  };
  if (h == 1) {
    for (EdgeId e = 0; e < g.m(); ++e) {
      out.classes.push_back({e});
    }
    out.attempts = 1;
    trace("trivial", 1, true, "h=1");
    return out;
  }
  if (g.m() == 0) {
    out.attempts = 1;
    return out;
  }
  PartitionOptions popt = params.partition;
  popt.mode = params.mode;
  MendOptions mopt{params.mode};
  for (std::size_t attempt = 1; attempt <= params.retries; ++attempt) {
    out.attempts = attempt;
    try {
      auto partition = feasible_partition(g, h, popt, rng);
      {
        std::ostringstream d;
        d << "m=" << partition.m << ",tries=" << partition.attempts
          << ",balance_ratio=" << partition.max_balance_ratio;
        trace("partition", attempt, true, d.str());
      }
      for (std::size_t ot = 0; ot < params.orientation_retries; ++ot) {
      auto orientation = feasible_orientation(g, partition, out.rooted, rng);
      trace("orientation", attempt, true, "slots=" + std::to_string(h));
      for (std::size_t mt = 0; mt < params.matching_retries; ++mt) {
        auto cs = build_class_set(orientation, out.rooted, rng);
        auto diag = diagnostics(cs, g.n(), 0);
        trace("classes", attempt, true,
              "bad=" + std::to_string(cs.bad_count()) + ",max_N=" + std::to_string(diag.max_n));
        for (std::size_t ct = 0; ct < params.color_retries; ++ct) {
          try {
            MendStats stats;
            auto mended = mend(cs, out.rooted, mopt, rng, &stats);
            trace("mend", attempt, true,
                  "initial_bad=" + std::to_string(stats.initial_bad) +
                      ",swaps=" + std::to_string(stats.swaps));
            out.mend = stats;
            out.max_balance_ratio = partition.max_balance_ratio;
            out.initial_diagnostics = diag;
            out.classes.reserve(mended.m);
            for (std::size_t c = 0; c < mended.m; ++c) {
              std::vector<EdgeId> copy;
              for (std::size_t i = 0; i < h; ++i) {
                copy.push_back(mended.at(c, i).edge);
              }
              out.classes.push_back(std::move(copy));
            }
            return out;
          } catch (const MendStuck& e) {
            ++out.histogram["mend"];
            trace("mend", attempt, false, e.what());
          }
        }
      }
      }
    } catch (const StageFailure& e) {
      ++out.histogram[e.stage()];
      trace(e.stage(), attempt, false, e.what());
    }
  }
  std::ostringstream msg;
  msg << "H-decomposition failed after " << params.retries << " attempts:";
  for (const auto& [stage, count] : out.histogram) {
    msg << ' ' << stage << '=' << count;
  }
  throw DecompositionFailed(msg.str(), out.histogram);
}

} // namespace tdecomp
