#include "tdecomp/verify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

namespace tdecomp {

std::string to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::overlap:
    return "overlap";
  case ViolationKind::coverage_gap:
    return "coverage-gap";
  case ViolationKind::wrong_size:
    return "wrong-size";
  case ViolationKind::not_a_tree:
    return "not-a-tree";
  case ViolationKind::wrong_isomorphism_type:
    return "wrong-isomorphism-type";
  case ViolationKind::count_mismatch:
    return "count-mismatch";
  }
  return "unknown";
}

std::string Violation::to_string() const {
  std::string s = tdecomp::to_string(kind) + ": class=";
  s += class_index ? std::to_string(*class_index) : std::string("-");
  s += " edges=";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) {
      s += ',';
    }
    s += std::to_string(edges[i].u) + "-" + std::to_string(edges[i].v);
  }
  return s;
}

std::vector<Violation> verify_decomposition(const Graph& g, const Family& family,
                                            const AlphaVector& alpha, const Decomposition& d) {
  std::vector<Violation> out;
  if (d.k != family.size() || alpha.size() != family.size()) {
    out.push_back({ViolationKind::count_mismatch, std::nullopt, {}});
  }
  std::vector<std::string> codes;
  for (const auto& t : family.trees) {
    codes.push_back(ahu_canonical(t));
  }
  std::vector<std::size_t> per_index(family.size(), 0);
  std::unordered_map<std::uint64_t, std::size_t> owner;  // edge key -> class
  std::vector<Edge> foreign;
  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    const auto& cls = d.classes[c];
    const bool known = cls.family_index < family.size();
    if (known) {
      ++per_index[cls.family_index];
    } else {
      out.push_back({ViolationKind::wrong_isomorphism_type, c, cls.edges});
    }
    std::vector<Edge> shared;
    for (const auto& e : cls.edges) {
      if (e.u >= g.n() || e.v >= g.n() || e.u == e.v || !g.has_edge(e.u, e.v)) {
        foreign.push_back(e);
        continue;
      }
      auto [it, fresh] = owner.emplace(edge_key(e.u, e.v), c);
      if (!fresh) {
        shared.push_back(e);
      }
    }
    if (!shared.empty()) {
      out.push_back({ViolationKind::overlap, c, shared});
    }
    if (!known) {
      continue;
    }
    if (cls.edges.size() != family.edges(cls.family_index)) {
      out.push_back({ViolationKind::wrong_size, c, cls.edges});
      continue;
    }
    auto tree = tree_from_host_edges(cls.edges);
    if (!tree) {
      out.push_back({ViolationKind::not_a_tree, c, cls.edges});
      continue;
    }
    if (ahu_canonical(*tree) != codes[cls.family_index]) {
      out.push_back({ViolationKind::wrong_isomorphism_type, c, cls.edges});
    }
  }
  if (!foreign.empty()) {
    out.push_back({ViolationKind::coverage_gap, std::nullopt, foreign});
  }
  std::vector<Edge> missing;
  for (const auto& e : g.edges()) {
    if (!owner.count(edge_key(e.u, e.v))) {
      missing.push_back(e);
    }
  }
  if (!missing.empty()) {
    out.push_back({ViolationKind::coverage_gap, std::nullopt, missing});
  }
  for (std::size_t i = 0; i < std::min(alpha.size(), family.size()); ++i) {
    if (per_index[i] != alpha[i]) {
      out.push_back({ViolationKind::count_mismatch, i, {}});
    }
  }
  return out;
}

namespace {

using Mask = std::uint32_t;

// Every edge subset of g forming a tree isomorphic to t, as bitmasks over
// edge ids. Subsets are enumerated directly, so automorphic images collapse.
std::vector<Mask> copies_of(const Graph& g, const Tree& t) {
  const std::size_t m = g.m();
  const std::size_t h = t.edge_count();
  std::vector<Mask> out;
  if (h > m) {
    return out;
  }
  const std::string code = ahu_canonical(t);
  std::vector<std::size_t> pick(h);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<Edge> edges(h);
  while (true) {
    for (std::size_t j = 0; j < h; ++j) {
      edges[j] = g.edge(static_cast<EdgeId>(pick[j]));
    }
    if (auto tree = tree_from_host_edges(edges); tree && ahu_canonical(*tree) == code) {
      Mask mask = 0;
      for (auto e : pick) {
        mask |= Mask{1} << e;
      }
      out.push_back(mask);
    }
    // Next h-combination of 0..m-1 in lexicographic order.
    std::size_t j = h;
    while (j > 0 && pick[j - 1] == m - h + (j - 1)) {
      --j;
    }
    if (j == 0) {
      break;
    }
    ++pick[j - 1];
    for (std::size_t r = j; r < h; ++r) {
      pick[r] = pick[r - 1] + 1;
    }
  }
  return out;
}

std::size_t lowest_bit(Mask m) { return static_cast<std::size_t>(std::countr_zero(m)); }

} // namespace

std::size_t brute_force_packing(const Graph& g, const Tree& h) {
  if (g.m() > packing_edge_limit) {
    throw OracleGuardExceeded("brute_force_packing: e(G) = " + std::to_string(g.m()) +
                              " exceeds the limit of " + std::to_string(packing_edge_limit));
  }
  const auto copies = copies_of(g, h);
  std::vector<std::vector<Mask>> by_edge(g.m());
  for (auto c : copies) {
    by_edge[lowest_bit(c)].push_back(c);
  }
  // best(avail): the lowest available edge is either left out or covered by
  // a copy whose lowest edge it is (copies containing lower edges were
  // decided earlier).
  std::unordered_map<Mask, std::size_t> memo;
  const std::size_t he = h.edge_count();
  auto best = [&](auto&& self, Mask avail) -> std::size_t {
    if (static_cast<std::size_t>(std::popcount(avail)) < he) {
      return 0;
    }
    if (auto it = memo.find(avail); it != memo.end()) {
      return it->second;
    }
    std::size_t e = lowest_bit(avail);
    std::size_t value = self(self, avail & ~(Mask{1} << e));
    const std::size_t bound = static_cast<std::size_t>(std::popcount(avail)) / he;
    for (auto c : by_edge[e]) {
      if (value == bound) {
        break;
      }
      if ((c & avail) == c) {
        value = std::max(value, 1 + self(self, avail & ~c));
      }
    }
    memo.emplace(avail, value);
    return value;
  };
  const Mask all = g.m() == 32 ? ~Mask{0} : ((Mask{1} << g.m()) - 1);
  std::size_t result = best(best, all);
  if (result > g.m() / he) {
    throw std::logic_error("brute_force_packing: P(H,G) exceeds floor(e(G)/e(H))");
  }
  return result;
}

bool brute_force_total(const Graph& g, const Family& family, const AlphaVector& alpha) {
  if (g.m() > total_edge_limit) {
    throw OracleGuardExceeded("brute_force_total: e(G) = " + std::to_string(g.m()) +
                              " exceeds the limit of " + std::to_string(total_edge_limit));
  }
  if (alpha.size() != family.size()) {
    return false;
  }
  std::size_t sum = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    sum += alpha[i] * family.edges(i);
  }
  if (sum != g.m()) {
    return false;
  }
  const std::size_t k = family.size();
  // copies[i][e]: copies of member i whose lowest edge is e.
  std::vector<std::vector<std::vector<Mask>>> copies(k, std::vector<std::vector<Mask>>(g.m()));
  for (std::size_t i = 0; i < k; ++i) {
    if (alpha[i] == 0) {
      continue;
    }
    for (auto c : copies_of(g, family.trees[i])) {
      copies[i][lowest_bit(c)].push_back(c);
    }
  }
  std::map<std::pair<Mask, AlphaVector>, bool> memo;
  AlphaVector remaining = alpha;
  // The lowest uncovered edge must be the lowest edge of the class covering it.
  auto solve = [&](auto&& self, Mask avail) -> bool {
    if (avail == 0) {
      return true;
    }
    auto key = std::pair(avail, remaining);
    if (auto it = memo.find(key); it != memo.end()) {
      return it->second;
    }
    const std::size_t e = lowest_bit(avail);
    bool ok = false;
    for (std::size_t i = 0; i < k && !ok; ++i) {
      if (remaining[i] == 0) {
        continue;
      }
      for (auto c : copies[i][e]) {
        if ((c & avail) != c) {
          continue;
        }
        --remaining[i];
        ok = self(self, avail & ~c);
        ++remaining[i];
        if (ok) {
          break;
        }
      }
    }
    memo.emplace(std::move(key), ok);
    return ok;
  };
  const Mask all = (Mask{1} << g.m()) - 1;
  return solve(solve, all);
}

} // namespace tdecomp
