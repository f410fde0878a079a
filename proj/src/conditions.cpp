#include "tdecomp/conditions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tdecomp {

bool ConditionReport::all_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const ConditionResult& r) { return r.status != Status::fail; });
}

const ConditionResult& ConditionReport::condition(int index) const {
  for (const auto& r : results) {
    if (r.index == index) {
      return r;
    }
  }
  throw std::out_of_range("no such condition in report");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::heuristic_pass: return "heuristic-pass";
  }
  return "?";
}

std::string format_report(const ConditionReport& report) {
  std::ostringstream out;
  for (const auto& r : report.results) {
    out << "condition" << r.index << ' ' << to_string(r.status);
    if (r.status == Status::fail) {
      out << " witness: ";
      for (std::size_t i = 0; i < r.witness.size(); ++i) {
        out << (i ? "," : "") << r.witness[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace {

// Adjacency restricted to one color (or all edges).
struct View {
  std::size_t n = 0;
  std::vector<std::vector<Vertex>> adj;
  std::vector<std::size_t> deg;

  bool adjacent(Vertex a, Vertex b) const {
    const auto& s = adj[a].size() < adj[b].size() ? adj[a] : adj[b];
    Vertex other = adj[a].size() < adj[b].size() ? b : a;
    return std::binary_search(s.begin(), s.end(), other);
  }
};

View make_view(const Graph& g, std::optional<Color> filter) {
  View v;
  v.n = g.n();
  v.adj.assign(g.n(), {});
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (filter && g.color(e) != *filter) {
      continue;
    }
    v.adj[g.edge(e).u].push_back(g.edge(e).v);
    v.adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  v.deg.resize(g.n());
  for (Vertex x = 0; x < g.n(); ++x) {
    std::sort(v.adj[x].begin(), v.adj[x].end());
    v.deg[x] = v.adj[x].size();
  }
  return v;
}

std::size_t out_of(const View& view, const std::vector<Vertex>& xs, std::vector<char>& mark) {
  for (auto x : xs) {
    mark[x] = 1;
  }
  std::size_t out = 0;
  for (auto x : xs) {
    for (auto y : view.adj[x]) {
      out += mark[y] ? 0 : 1;
    }
  }
  for (auto x : xs) {
    mark[x] = 0;
  }
  return out;
}

std::size_t in_of(const View& view, const std::vector<Vertex>& xs, std::vector<char>& mark) {
  for (auto x : xs) {
    mark[x] = 1;
  }
  std::size_t twice = 0;
  for (auto x : xs) {
    for (auto y : view.adj[x]) {
      twice += mark[y] ? 1 : 0;
    }
  }
  for (auto x : xs) {
    mark[x] = 0;
  }
  return twice / 2;
}

std::vector<Vertex> members_of(std::uint32_t mask) {
  std::vector<Vertex> out;
  for (Vertex v = 0; mask; ++v, mask >>= 1) {
    if (mask & 1U) {
      out.push_back(v);
    }
  }
  return out;
}

ConditionResult degree_condition(int index, const View& view, double threshold, bool upper) {
  ConditionResult r;
  r.index = index;
  r.threshold = threshold;
  if (view.n == 0) {
    return r;
  }
  auto it = upper ? std::max_element(view.deg.begin(), view.deg.end())
                  : std::min_element(view.deg.begin(), view.deg.end());
  auto v = static_cast<Vertex>(it - view.deg.begin());
  r.observed = static_cast<double>(*it);
  bool ok = upper ? r.observed <= threshold : r.observed >= threshold;
  if (!ok) {
    r.status = Status::fail;
    r.witness = {v};
  }
  return r;
}

// out(X) >= rate * |X| for all 1 <= |X| <= n/2.
ConditionResult expansion_condition(int index, const View& view, double rate,
                                    const ConditionParams& params, Rng& rng) {
  ConditionResult r;
  r.index = index;
  r.threshold = rate;
  const std::size_t n = view.n;
  const std::size_t half = n / 2;
  std::vector<char> mark(n, 0);
  auto fail_with = [&](std::vector<Vertex> xs, std::size_t out) {
    r.status = Status::fail;
    r.observed = static_cast<double>(out);
    std::sort(xs.begin(), xs.end());
    r.witness = std::move(xs);
    return r;
  };
  auto violates = [&](std::size_t out, std::size_t size) {
    return static_cast<double>(out) < rate * static_cast<double>(size);
  };

  if (n <= params.exact_limit) {
    std::vector<std::uint32_t> adjmask(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      for (auto w : view.adj[v]) {
        adjmask[v] |= 1U << w;
      }
    }
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      auto size = static_cast<std::size_t>(std::popcount(mask));
      if (size > half) {
        continue;
      }
      std::size_t out = 0;
      for (std::uint32_t m = mask; m; m &= m - 1) {
        auto v = static_cast<Vertex>(std::countr_zero(m));
        out += static_cast<std::size_t>(std::popcount(adjmask[v] & ~mask));
      }
      if (violates(out, size)) {
        return fail_with(members_of(mask), out);
      }
    }
    return r;
  }

  // Exact tier for |X| <= 3: out(X) >= sum deg - 2 e(X) >= sum deg - 2 C(|X|,2),
  // so only tuples below that bound need an explicit count.
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return view.deg[a] < view.deg[b]; });
  for (auto v : order) {
    if (!violates(view.deg[v], 1)) {
      break;
    }
    return fail_with({v}, view.deg[v]);
  }
  if (half >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      auto a = order[i];
      if (2.0 * static_cast<double>(view.deg[a]) - 2.0 >= 2 * rate) {
        break;
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        auto b = order[j];
        double lower = static_cast<double>(view.deg[a] + view.deg[b]) - 2.0;
        if (lower >= 2 * rate) {
          break;
        }
        std::size_t out = view.deg[a] + view.deg[b] - (view.adjacent(a, b) ? 2 : 0);
        if (violates(out, 2)) {
          return fail_with({a, b}, out);
        }
      }
    }
  }
  if (half >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      auto a = order[i];
      if (3.0 * static_cast<double>(view.deg[a]) - 6.0 >= 3 * rate) {
        break;
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        auto b = order[j];
        if (static_cast<double>(view.deg[a] + 2 * view.deg[b]) - 6.0 >= 3 * rate) {
          break;
        }
        for (std::size_t k = j + 1; k < n; ++k) {
          auto c = order[k];
          double lower = static_cast<double>(view.deg[a] + view.deg[b] + view.deg[c]) - 6.0;
          if (lower >= 3 * rate) {
            break;
          }
          std::size_t e = (view.adjacent(a, b) ? 1 : 0) + (view.adjacent(a, c) ? 1 : 0) +
                          (view.adjacent(b, c) ? 1 : 0);
          std::size_t out = view.deg[a] + view.deg[b] + view.deg[c] - 2 * e;
          if (violates(out, 3)) {
            return fail_with({a, b, c}, out);
          }
        }
      }
    }
  }

  // Sampled tier: sizes 4, 8, 16, ... and n/2 itself; random subsets, the
  // lowest-degree prefix, and a BFS ball around a random vertex.
  std::vector<std::size_t> sizes;
  for (std::size_t s = 4; s < half; s *= 2) {
    sizes.push_back(s);
  }
  if (half >= 4) {
    sizes.push_back(half);
  }
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (auto s : sizes) {
    for (std::size_t t = 0; t < params.samples_per_size; ++t) {
      for (std::size_t i = 0; i < s; ++i) {
        auto j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
      }
      std::vector<Vertex> xs(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
      auto out = out_of(view, xs, mark);
      if (violates(out, s)) {
        return fail_with(xs, out);
      }
    }
    std::vector<Vertex> low(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s));
    auto out = out_of(view, low, mark);
    if (violates(out, s)) {
      return fail_with(low, out);
    }
    // BFS ball: locally clustered sets expand worst in sparse random graphs.
    std::vector<Vertex> ball{static_cast<Vertex>(rng.below(n))};
    std::vector<char> seen(n, 0);
    seen[ball[0]] = 1;
    for (std::size_t i = 0; i < ball.size() && ball.size() < s; ++i) {
      for (auto w : view.adj[ball[i]]) {
        if (!seen[w] && ball.size() < s) {
          seen[w] = 1;
          ball.push_back(w);
        }
      }
    }
    if (ball.size() == s) {
      out = out_of(view, ball, mark);
      if (violates(out, s)) {
        return fail_with(ball, out);
      }
    }
  }
  r.status = Status::heuristic_pass;
  return r;
}

// in(X) >= bound for all |X| >= n/2; it suffices to look at |X| = ceil(n/2).
ConditionResult density_condition(int index, const View& view, double bound,
                                  const ConditionParams& params, Rng& rng) {
  ConditionResult r;
  r.index = index;
  r.threshold = bound;
  const std::size_t n = view.n;
  const std::size_t size = (n + 1) / 2;
  std::vector<char> mark(n, 0);
  auto fail_with = [&](std::vector<Vertex> xs, std::size_t in) {
    r.status = Status::fail;
    r.observed = static_cast<double>(in);
    std::sort(xs.begin(), xs.end());
    r.witness = std::move(xs);
    return r;
  };
  if (n <= params.exact_limit) {
    std::vector<std::uint32_t> adjmask(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      for (auto w : view.adj[v]) {
        adjmask[v] |= 1U << w;
      }
    }
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      if (2 * static_cast<std::size_t>(std::popcount(mask)) < n) {
        continue;
      }
      std::size_t twice = 0;
      for (std::uint32_t m = mask; m; m &= m - 1) {
        twice += static_cast<std::size_t>(std::popcount(adjmask[std::countr_zero(m)] & mask));
      }
      if (static_cast<double>(twice / 2) < bound) {
        return fail_with(members_of(mask), twice / 2);
      }
    }
    return r;
  }
  auto check = [&](std::vector<Vertex> xs) -> bool {
    auto in = in_of(view, xs, mark);
    if (static_cast<double>(in) < bound) {
      fail_with(std::move(xs), in);
      return false;
    }
    return true;
  };
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return view.deg[a] < view.deg[b]; });
  if (!check({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size)})) {
    return r;
  }
  // Greedy peel: drop the vertex with the most neighbors inside X until size remain.
  {
    std::vector<char> inside(n, 1);
    std::vector<std::size_t> inner(view.deg);
    std::size_t remaining = n;
    while (remaining > size) {
      Vertex worst = 0;
      bool found = false;
      for (Vertex v = 0; v < n; ++v) {
        if (inside[v] && (!found || inner[v] > inner[worst])) {
          worst = v;
          found = true;
        }
      }
      inside[worst] = 0;
      --remaining;
      for (auto w : view.adj[worst]) {
        --inner[w];
      }
    }
    std::vector<Vertex> xs;
    for (Vertex v = 0; v < n; ++v) {
      if (inside[v]) {
        xs.push_back(v);
      }
    }
    if (!check(xs)) {
      return r;
    }
  }
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t t = 0; t < params.samples_per_size; ++t) {
    rng.shuffle(pool.begin(), pool.end());
    if (!check({pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size)})) {
      return r;
    }
  }
  r.status = Status::heuristic_pass;
  return r;
}

} // namespace

ConditionReport check_lemma22(const Graph& g, const ConditionParams& params, Rng& rng) {
  if (!g.colored()) {
    if (g.m() > 0) {
      throw GraphError("check_lemma22 needs a two-colored graph");
    }
  }
  if (g.n() < 2) {
    throw std::invalid_argument("check_lemma22 needs n >= 2");
  }
  const auto& a = params.lemma22;
  const double scale = params.C * std::log(static_cast<double>(g.n()));
  View all = make_view(g, std::nullopt);
  View red = g.colored() ? make_view(g, Color::red) : make_view(g, std::nullopt);
  View blue = g.colored() ? make_view(g, Color::blue) : make_view(g, std::nullopt);
  ConditionReport rep;
  rep.results.push_back(degree_condition(1, all, a.max_degree * scale, true));
  rep.results.push_back(degree_condition(2, red, a.red_min_degree * scale, false));
  rep.results.push_back(degree_condition(3, blue, a.blue_min_degree * scale, false));
  rep.results.push_back(expansion_condition(4, blue, a.blue_expansion * scale, params, rng));
  rep.results.push_back(density_condition(
      5, blue, a.blue_density * scale * static_cast<double>(g.n()), params, rng));
  if (params.mode == Mode::strict && params.family_total) {
    rep.constant_meets_bound = std::log(params.C) >=
                               30.0 * std::log(28.0 * static_cast<double>(*params.family_total));
  }
  return rep;
}

ConditionReport check_lemma23(const Graph& g, double C1, const ConditionParams& params, Rng& rng) {
  if (g.n() < 2) {
    throw std::invalid_argument("check_lemma23 needs n >= 2");
  }
  const auto& a = params.lemma23;
  const double scale = C1 * std::log(static_cast<double>(g.n()));
  View all = make_view(g, std::nullopt);
  ConditionReport rep;
  auto upper = degree_condition(1, all, a.max_degree * scale, true);
  auto lower = degree_condition(1, all, a.min_degree * scale, false);
  rep.results.push_back(upper.status == Status::fail ? upper : lower);
  rep.results.push_back(expansion_condition(2, all, a.expansion * scale, params, rng));
  return rep;
}

} // namespace tdecomp
