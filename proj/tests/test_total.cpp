#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "tdecomp/experiments.hpp"
#include "tdecomp/total.hpp"
#include "tdecomp/verify.hpp"

using namespace tdecomp;

namespace {

Family p_k2() { return Family{{Tree::path(2), Tree::path(1)}}; }

Graph colored_gnp(std::size_t n, double cprime, Rng& rng) {
  return gen_colored_gnp(n, cprime * std::log(static_cast<double>(n)) / static_cast<double>(n), rng);
}

void check_classes_disjoint(const std::vector<DecompClass>& classes, const Family& family) {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& c : classes) {
    CHECK(c.edges.size() == family.edges(c.family_index));
    auto t = tree_from_host_edges(c.edges);
    REQUIRE(t.has_value());
    CHECK(ahu_canonical(*t) == ahu_canonical(family.trees[c.family_index]));
    for (const auto& e : c.edges) {
      CHECK(seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second);
    }
  }
}

} // namespace

TEST_SUITE("total-decomposer") {

TEST_CASE("split_family examples") {
  auto f = p_k2();
  auto a = split_family(f, {0, 180}, 180);
  CHECK(a.f1 == std::vector<std::size_t>{0});
  CHECK(a.f2 == std::vector<std::size_t>{1});
  auto b = split_family(f, {90, 0}, 180);
  CHECK(b.f1 == std::vector<std::size_t>{1});
  CHECK(b.f2 == std::vector<std::size_t>{0});
  Family single{{Tree::star(3)}};
  auto s = split_family(single, {40}, 120);
  CHECK(s.f1.empty());
  CHECK(s.f2 == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(split_family(f, {1, 1}, 180), std::invalid_argument);
}

TEST_CASE("compute_ti examples") {
  CHECK(compute_ti({10, 30}, 5) == std::vector<std::uint64_t>{12500, 37500});
  CHECK(compute_ti({7}, 2) == std::vector<std::uint64_t>{8000});
  CHECK(compute_ti({1, 1}, 3) == std::vector<std::uint64_t>{9000, 9000});
  CHECK_THROWS_AS(compute_ti({0, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(compute_ti({1, 1000}, 3, Mode::strict), std::domain_error);
  CHECK_NOTHROW(compute_ti({1, 1000}, 3, Mode::relaxed));
}

TEST_CASE("compute_ti is exact for huge inputs") {
  const std::uint64_t big = 3'000'000'000'000'000'000ULL;
  auto t = compute_ti({big, big, big}, 1000);
  // 2000 * 10^6 / 3 = 666666666.67
  CHECK(t == std::vector<std::uint64_t>{666666666, 666666666, 666666666});
}

TEST_CASE("plan_q_b examples") {
  auto p = plan_q_b(1000, 33, {1}, {30}, Mode::strict);
  CHECK(p.q == 30);
  CHECK(p.b == std::vector<std::uint64_t>{0});
  CHECK_FALSE(p.clamped);
  auto r = plan_q_b(1000, 33, {1, 2}, {41, 65}, Mode::strict);
  CHECK(r.q == 30);
  CHECK(r.b == std::vector<std::uint64_t>{11, 5});
  auto z = plan_q_b(33, 33, {11, 22}, {5, 9}, Mode::strict);
  CHECK(z.q == 0);
  CHECK(z.b == std::vector<std::uint64_t>{5, 9});
  CHECK_THROWS_AS(plan_q_b(10, 0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(plan_q_b(1000, 10, {5, 5}, {1, 100}, Mode::strict), std::domain_error);
  auto c = plan_q_b(1000, 10, {5, 5}, {1, 100}, Mode::relaxed);
  CHECK(c.clamped);
  CHECK(c.q == 0);
}

TEST_CASE("alpha_i = t_i q + b_i reassembles exactly") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> t;
    std::vector<std::uint64_t> alpha;
    std::uint64_t h = 0;
    for (std::size_t i = 0, k = 1 + rng.below(4); i < k; ++i) {
      t.push_back(1 + rng.below(5));
      alpha.push_back(rng.below(1000));
      h += t.back() * (1 + rng.below(3));
    }
    auto plan = plan_q_b(rng.below(10000), h, t, alpha, Mode::relaxed);
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(t[i] * plan.q + plan.b[i] == alpha[i]);
    }
  }
}

TEST_CASE("t_i q <= alpha_i holds at strict scale") {
  Rng rng(2718);
  std::size_t checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Family f;
    AlphaVector alpha;
    std::uint64_t m = 0;
    for (std::size_t i = 0, k = 1 + rng.below(4); i < k; ++i) {
      f.trees.push_back(Tree::path(1 + rng.below(5)));
      alpha.push_back(rng.bernoulli(0.3) ? rng.below(1000) : 1'000'000 + rng.below(1'000'000'000));
      m += alpha.back() * f.edges(i);
    }
    if (m == 0) {
      continue;
    }
    FamilySplit split;
    try {
      split = split_family(f, alpha, m);
    } catch (const std::logic_error&) {
      continue;
    }
    std::vector<std::uint64_t> a;
    std::uint64_t e_prime = 0;
    std::uint64_t c = f.total_edges();
    for (auto i : split.f2) {
      a.push_back(alpha[i]);
      e_prime += alpha[i] * f.edges(i);
      // the scale hypothesis, evaluated directly
      REQUIRE(static_cast<unsigned __int128>(20) * c * c * alpha[i] >= m);
    }
    auto t = compute_ti(a, c, Mode::strict);
    std::uint64_t h = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      CHECK(t[j] >= 100);
      CHECK(t[j] <= 2000 * c * c);
      h += t[j] * f.edges(split.f2[j]);
    }
    const auto q = static_cast<std::uint64_t>(static_cast<unsigned __int128>(99) * e_prime /
                                              (static_cast<unsigned __int128>(100) * h));
    for (std::size_t j = 0; j < t.size(); ++j) {
      CHECK(static_cast<unsigned __int128>(t[j]) * q <= a[j]);
    }
    auto plan = plan_q_b(e_prime, h, t, a, Mode::strict);
    CHECK(plan.q == q);
    CHECK_FALSE(plan.clamped);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("choose_relaxed_t minimises the G'' edge count") {
  auto choice = choose_relaxed_t({7}, {3}, 21, 12);
  CHECK(choice.t == std::vector<std::uint64_t>{1});
  CHECK(choice.h == 3);
  CHECK(choice.plan.q == 6);
  CHECK(choice.gpp_edges == 3);
  // Brute-force comparison over small instances.
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint64_t> alpha;
    std::vector<std::uint64_t> sizes;
    std::uint64_t e = 0;
    for (std::size_t i = 0, k = 1 + rng.below(3); i < k; ++i) {
      sizes.push_back(1 + rng.below(4));
      alpha.push_back(rng.below(60));
      e += alpha.back() * sizes.back();
    }
    if (e == 0) {
      continue;
    }
    auto got = choose_relaxed_t(alpha, sizes, e, 12);
    std::uint64_t best = ~0ULL;
    std::vector<std::uint64_t> t(alpha.size(), 0);
    for (std::uint64_t code = 0; code < 2197; ++code) {  // 13^3
      std::uint64_t x = code;
      std::uint64_t h = 0;
      bool valid = true;
      for (std::size_t i = 0; i < 3; ++i) {
        const std::uint64_t ti = x % 13;
        x /= 13;
        if (i >= alpha.size()) {
          valid = valid && ti == 0;
          continue;
        }
        t[i] = ti;
        valid = valid && (ti == 0 || alpha[i] > 0);
        h += ti * sizes[i];
      }
      if (!valid || h == 0 || h > 12) {
        continue;
      }
      auto plan = plan_q_b(e, h, t, alpha, Mode::relaxed);
      std::uint64_t gpp = 0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        gpp += plan.b[i] * sizes[i];
      }
      best = std::min(best, gpp);
    }
    if (best != ~0ULL) {
      CHECK(got.gpp_edges == best);
      CHECK(got.h <= 12);
    }
  }
}

TEST_CASE("greedy_red_phase examples") {
  Rng rng(1);
  auto k6 = oracle::complete_graph(6, Color::red);
  EdgeMask used;
  auto none = greedy_red_phase(k6, p_k2(), {}, used, rng);
  CHECK(none.empty());
  auto classes = greedy_red_phase(k6, p_k2(), {{0, 3}}, used, rng);
  REQUIRE(classes.size() == 3);
  check_classes_disjoint(classes, p_k2());
  CHECK(std::count(used.begin(), used.end(), true) == 6);
  for (const auto& c : classes) {
    CHECK(c.provenance == Provenance::greedy_red);
  }
  EdgeMask fresh;
  CHECK_THROWS_AS(greedy_red_phase(k6, p_k2(), {{0, 8}}, fresh, rng), GreedyPhaseFailed);
  EdgeMask blue;
  CHECK_THROWS_AS(greedy_red_phase(oracle::complete_graph(6, Color::blue), p_k2(), {{1, 1}}, blue,
                                   rng),
                  GreedyPhaseFailed);
}

TEST_CASE("build_gpp keeps the degree cap on a seeded n = 400 fixture") {
  Rng rng(400);
  auto g = colored_gnp(400, 8.0, rng);
  const auto cap = static_cast<std::size_t>(std::floor(0.5 * 8.0 * std::log(400.0)));
  EdgeMask used(g.m(), false);
  for (EdgeId e = 0; e < g.m(); e += 7) {
    used[e] = true;
  }
  auto out = build_gpp(g, used, p_k2(), {{0, 150}, {1, 100}}, cap, rng);
  MESSAGE("Delta(G'') = " << out.max_degree << " with cap " << cap);
  CHECK(out.max_degree <= cap);
  CHECK(std::count(out.mask.begin(), out.mask.end(), true) == 150 * 2 + 100);
  REQUIRE(out.classes.size() == 250);
  check_classes_disjoint(out.classes, p_k2());
  // smallest member first
  CHECK(out.classes.front().family_index == 1);
  CHECK(out.classes.back().family_index == 0);
  std::vector<std::size_t> degree(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (out.mask[e]) {
      CHECK_FALSE(used[e]);
      ++degree[g.edge(e).u];
      ++degree[g.edge(e).v];
    }
  }
  CHECK(*std::max_element(degree.begin(), degree.end()) == out.max_degree);
}

TEST_CASE("build_gpp edge cases") {
  Rng rng(1);
  auto g = oracle::complete_graph(8, Color::blue);
  auto empty = build_gpp(g, {}, p_k2(), {}, 3, rng);
  CHECK(empty.classes.empty());
  CHECK(std::count(empty.mask.begin(), empty.mask.end(), true) == 0);
  CHECK_THROWS_AS(build_gpp(g, {}, p_k2(), {{1, 1}}, 0, rng), GppFailed);
}

TEST_CASE("decompose_total: the single-edge family puts every edge in its own class") {
  Rng rng(6);
  auto g = colored_gnp(120, 8.0, rng);
  Family k2{{Tree::path(1)}};
  auto res = decompose_total(g, k2, {g.m()}, {}, rng);
  CHECK(res.decomposition.classes.size() == g.m());
  CHECK(verify_decomposition(g, k2, {g.m()}, res.decomposition).empty());
}

TEST_CASE("decompose_total: K7 all blue into seven P3 copies") {
  auto k7 = oracle::complete_graph(7, Color::blue);
  Family f{{Tree::path(3), Tree::path(1)}};
  Rng rng(7);
  auto res = decompose_total(k7, f, {7, 0}, {}, rng);
  CHECK(res.decomposition.classes.size() == 7);
  CHECK(verify_decomposition(k7, f, {7, 0}, res.decomposition).empty());
  CHECK(res.report.gstar_edges == res.report.q * res.report.h);
}

TEST_CASE("decompose_total: errors") {
  Rng rng(1);
  auto k4 = oracle::complete_graph(4, Color::blue);
  CHECK_THROWS_AS(decompose_total(k4, p_k2(), {1, 1}, {}, rng), std::invalid_argument);
  CHECK_THROWS_AS(decompose_total(k4, p_k2(), {3}, {}, rng), std::invalid_argument);
  auto empty = decompose_total(Graph(5), p_k2(), {0, 0}, {}, rng);
  CHECK(empty.decomposition.classes.empty());
}

TEST_CASE("strict mode at desk scale fails honestly with the phase named") {
  auto k7 = oracle::complete_graph(7, Color::blue);
  Family f{{Tree::path(3), Tree::path(1)}};
  Rng rng(7);
  TotalParams params;
  params.mode = Mode::strict;
  params.retries = 2;
  try {
    decompose_total(k7, f, {7, 0}, params, rng);
    FAIL("strict mode unexpectedly succeeded");
  } catch (const TotalDecompositionFailed& e) {
    CHECK(e.last_phase() == "gpp");
    CHECK(e.histogram().at("gpp") == 2);
  }
}

TEST_CASE("decompose_total invariants on random instances") {
  Family f{{Tree::star(3), Tree::path(3), Tree::path(1)}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    auto g = colored_gnp(300, 10.0, rng);
    auto alpha = sample_alpha(f, g.m(), rng);
    std::vector<std::string> trace;
    TotalParams params;
    params.cprime = 10.0;
    params.trace = [&](const std::string& line) { trace.push_back(line); };
    auto res = decompose_total(g, f, alpha, params, rng);
    const auto& r = res.report;
    CHECK(verify_decomposition(g, f, alpha, res.decomposition).empty());
    CHECK(r.gstar_edges == r.q * r.h);
    CHECK(r.gpp_max_degree <= r.gpp_cap);
    std::map<std::pair<Provenance, std::size_t>, std::size_t> count;
    for (const auto& c : res.decomposition.classes) {
      ++count[{c.provenance, c.family_index}];
    }
    for (auto i : r.split.f1) {
      CHECK(count[{Provenance::greedy_red, i}] == alpha[i]);
    }
    std::uint64_t h = 0;
    for (std::size_t j = 0; j < r.split.f2.size(); ++j) {
      auto i = r.split.f2[j];
      CHECK(r.b[j] + r.q * r.t[j] == alpha[i]);
      CHECK(count[{Provenance::gpp, i}] == r.b[j]);
      CHECK(count[{Provenance::via_h, i}] == r.q * r.t[j]);
      h += r.t[j] * f.edges(i);
    }
    CHECK(h == r.h);
    CHECK(r.e_prime == r.gpp_edges + r.gstar_edges);
    CHECK(std::any_of(trace.begin(), trace.end(),
                      [](const std::string& s) { return s.rfind("phase=plan", 0) == 0; }));
  }
}

}
