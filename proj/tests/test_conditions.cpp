#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tdecomp/conditions.hpp"
#include "tdecomp/graph.hpp"

using namespace tdecomp;

namespace {

std::vector<bool> as_mask(std::size_t n, const std::vector<Vertex>& xs) {
  std::vector<bool> mark(n, false);
  for (auto v : xs) {
    mark[v] = true;
  }
  return mark;
}

std::size_t colored_degree(const Graph& g, Vertex v, std::optional<Color> c) {
  return c ? g.degree(v, *c) : g.degree(v);
}

// Re-evaluates a failing lemma 2.2 result straight from the graph.
void certify22(const Graph& g, const ConditionResult& r) {
  REQUIRE_FALSE(r.witness.empty());
  const auto mark = as_mask(g.n(), r.witness);
  const double size = static_cast<double>(r.witness.size());
  switch (r.index) {
    case 1:
      CHECK(static_cast<double>(g.degree(r.witness[0])) > r.threshold);
      break;
    case 2:
      CHECK(static_cast<double>(colored_degree(g, r.witness[0], Color::red)) < r.threshold);
      break;
    case 3:
      CHECK(static_cast<double>(colored_degree(g, r.witness[0], Color::blue)) < r.threshold);
      break;
    case 4:
      CHECK(2 * r.witness.size() <= g.n());
      CHECK(static_cast<double>(oracle::out_direct(g, mark, Color::blue)) < r.threshold * size);
      break;
    case 5:
      CHECK(2 * r.witness.size() >= g.n());
      CHECK(static_cast<double>(oracle::in_direct(g, mark, Color::blue)) < r.threshold);
      break;
    default:
      FAIL("unexpected condition index");
  }
}

// Full 2^n evaluation of conditions 4 and 5.
std::pair<bool, bool> exact_expansion_density(const Graph& g, const ConditionParams& p) {
  const std::size_t n = g.n();
  const double scale = p.C * std::log(static_cast<double>(n));
  bool c4 = true;
  bool c5 = true;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<bool> mark(n);
    std::size_t size = 0;
    for (std::size_t v = 0; v < n; ++v) {
      mark[v] = (mask >> v) & 1U;
      size += mark[v] ? 1 : 0;
    }
    if (2 * size <= n &&
        static_cast<double>(oracle::out_direct(g, mark, Color::blue)) <
            p.lemma22.blue_expansion * scale * static_cast<double>(size)) {
      c4 = false;
    }
    if (2 * size >= n && static_cast<double>(oracle::in_direct(g, mark, Color::blue)) <
                             p.lemma22.blue_density * scale * static_cast<double>(n)) {
      c5 = false;
    }
  }
  return {c4, c5};
}

} // namespace

TEST_SUITE("semirandom-conditions") {

TEST_CASE("isolated vertex fails condition 2 with that vertex as witness") {
  Graph g(6);
  for (Vertex u = 0; u < 5; ++u) {
    for (Vertex v = u + 1; v < 5; ++v) {
      g.add_edge(u, v, Color::red);
    }
  }
  Rng rng(1);
  auto rep = check_lemma22(g, ConditionParams::strict(8.0), rng);
  const auto& c2 = rep.condition(2);
  CHECK(c2.status == Status::fail);
  CHECK(c2.witness == std::vector<Vertex>{5});
  CHECK(c2.observed == 0.0);
  certify22(g, c2);
}

TEST_CASE("empty graph fails conditions 2 and 3") {
  Rng rng(1);
  for (double C : {0.5, 8.0, 100.0}) {
    auto rep = check_lemma22(Graph(10), ConditionParams::strict(C), rng);
    CHECK(rep.condition(2).status == Status::fail);
    CHECK(rep.condition(3).status == Status::fail);
    CHECK_FALSE(rep.all_pass());
  }
}

TEST_CASE("seeded colored G(800, 8 ln n / n) passes all five relaxed conditions") {
  const std::size_t n = 800;
  Rng rng(2024);
  auto g = gen_colored_gnp(n, 8.0 * std::log(static_cast<double>(n)) / n, rng);
  Rng check_rng(5);
  auto rep = check_lemma22(g, ConditionParams::relaxed(8.0), check_rng);
  INFO(format_report(rep));
  CHECK(rep.all_pass());
  CHECK(rep.condition(1).status == Status::pass);
  CHECK(rep.condition(2).status == Status::pass);
  CHECK(rep.condition(3).status == Status::pass);
  CHECK(rep.condition(4).status == Status::heuristic_pass);
  CHECK(rep.condition(5).status == Status::heuristic_pass);
}

TEST_CASE("lemma 2.3: K4 degree window") {
  // Degree 3 sits under the max-degree bound only once 3 <= upper * C1 * ln 4.
  Rng rng(1);
  auto tiny = check_lemma23(oracle::complete_graph(4), 0.01, ConditionParams::strict(0.01), rng);
  CHECK(tiny.condition(1).status == Status::fail);
  CHECK(3.0 >= ConditionParams::strict(0.01).lemma23.min_degree * 0.01 * std::log(4.0));
  auto mid = check_lemma23(oracle::complete_graph(4), 2.0, ConditionParams::strict(2.0), rng);
  CHECK(mid.condition(1).status == Status::pass);
}

TEST_CASE("lemma 2.3: a star fails expansion and a leaf pair is a violator") {
  const std::size_t n = 30;
  Graph star(n);
  for (Vertex v = 1; v < n; ++v) {
    star.add_edge(0, v);
  }
  const double C1 = 1.0;
  const double scale = C1 * std::log(static_cast<double>(n));
  REQUIRE(scale > 2.4);
  Rng rng(3);
  auto params = ConditionParams::strict(C1);
  auto rep = check_lemma23(star, C1, params, rng);
  const auto& c2 = rep.condition(2);
  REQUIRE(c2.status == Status::fail);
  const auto mark = as_mask(n, c2.witness);
  CHECK(static_cast<double>(oracle::out_direct(star, mark)) <
        c2.threshold * static_cast<double>(c2.witness.size()));
  CHECK(out_count(star, {{1, 2}}) == 2);
  CHECK(2.0 < params.lemma23.expansion * scale * 2.0);
}

TEST_CASE("lemma 2.3: paths with n >= 16 fail the minimum degree condition") {
  for (std::size_t n : {16, 40, 300}) {
    Graph path(n);
    for (Vertex v = 0; v + 1 < n; ++v) {
      path.add_edge(v, v + 1);
    }
    for (double C1 : {1.0, 2.0}) {
      Rng rng(4);
      auto rep = check_lemma23(path, C1, ConditionParams::strict(C1), rng);
      const auto& c1 = rep.condition(1);
      REQUIRE(c1.status == Status::fail);
      REQUIRE(c1.witness.size() == 1);
      CHECK(path.degree(c1.witness[0]) == 1);
      CHECK(c1.observed == 1.0);
    }
  }
}

TEST_CASE("fail witnesses are self-certifying") {
  Rng rng(77);
  std::size_t failures = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + rng.below(60);
    auto g = gen_colored_gnp(n, 0.05 + 0.4 * rng.uniform(), rng);
    auto params = rng.bernoulli(0.5) ? ConditionParams::strict(0.5 + 4 * rng.uniform())
                                     : ConditionParams::relaxed(0.5 + 10 * rng.uniform());
    auto rep = check_lemma22(g, params, rng);
    for (const auto& r : rep.results) {
      if (r.status == Status::fail) {
        ++failures;
        certify22(g, r);
      } else {
        CHECK(r.witness.empty());
      }
    }
    auto uncolored = gen_gnp(n, 0.1 + 0.3 * rng.uniform(), rng);
    const double rep23_c1 = 0.5 + 3 * rng.uniform();
    auto rep23 = check_lemma23(uncolored, rep23_c1, params, rng);
    for (const auto& r : rep23.results) {
      if (r.status != Status::fail) {
        continue;
      }
      ++failures;
      if (r.index == 1) {
        double d = static_cast<double>(uncolored.degree(r.witness[0]));
        CHECK(d == r.observed);
        const double scale = rep23_c1 * std::log(static_cast<double>(n));
        if (r.threshold == params.lemma23.max_degree * scale) {
          CHECK(d > r.threshold);
        } else {
          CHECK(r.threshold == params.lemma23.min_degree * scale);
          CHECK(d < r.threshold);
        }
      } else {
        auto mark = as_mask(n, r.witness);
        CHECK(static_cast<double>(oracle::out_direct(uncolored, mark)) <
              r.threshold * static_cast<double>(r.witness.size()));
      }
    }
  }
  CHECK(failures > 20);
}

TEST_CASE("exact tier agrees with full enumeration for n <= 14") {
  Rng rng(13);
  std::size_t passes = 0;
  std::size_t fails = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.below(11);
    auto g = gen_colored_gnp(n, 0.3 + 0.7 * rng.uniform(), rng);
    auto params = ConditionParams::relaxed(0.3 + 3 * rng.uniform());
    auto rep = check_lemma22(g, params, rng);
    auto [c4, c5] = exact_expansion_density(g, params);
    CHECK((rep.condition(4).status == Status::pass) == c4);
    CHECK((rep.condition(5).status == Status::pass) == c5);
    CHECK(rep.condition(4).status != Status::heuristic_pass);
    (c4 ? passes : fails) += 1;
    (c5 ? passes : fails) += 1;
  }
  CHECK(passes > 5);
  CHECK(fails > 5);
}

TEST_CASE("adding a blue edge never breaks conditions 4 or 5 in exact mode") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.below(9);
    auto g = gen_colored_gnp(n, 0.5, rng);
    std::vector<Edge> missing;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) {
          missing.push_back({u, v});
        }
      }
    }
    if (missing.empty() || g.m() == 0) {
      continue;
    }
    auto params = ConditionParams::relaxed(0.3 + 2 * rng.uniform());
    auto before = check_lemma22(g, params, rng);
    auto e = missing[rng.below(missing.size())];
    Graph more = g;
    more.add_edge(e.u, e.v, Color::blue);
    auto after = check_lemma22(more, params, rng);
    for (int k : {4, 5}) {
      if (before.condition(k).status == Status::pass) {
        CHECK(after.condition(k).status == Status::pass);
      }
    }
  }
}

TEST_CASE("report text format") {
  Rng rng(1);
  Graph g(4);
  g.add_edge(0, 1, Color::blue);
  auto rep = check_lemma22(g, ConditionParams::strict(8.0), rng);
  auto text = format_report(rep);
  CHECK(text.find("condition1 pass\n") != std::string::npos);
  CHECK(text.find("condition2 fail witness: ") != std::string::npos);
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == 5);
}

TEST_CASE("strict mode reports whether C meets the (28c)^30 bound") {
  Rng rng(1);
  auto g = oracle::complete_graph(5, Color::blue);
  auto p = ConditionParams::strict(1e44);
  p.family_total = 1;
  CHECK(check_lemma22(g, p, rng).constant_meets_bound == true);
  p.C = 8;
  CHECK(check_lemma22(g, p, rng).constant_meets_bound == false);
  auto relaxed = ConditionParams::relaxed(8);
  relaxed.family_total = 1;
  CHECK_FALSE(check_lemma22(g, relaxed, rng).constant_meets_bound.has_value());
}

TEST_CASE("input errors") {
  Rng rng(1);
  auto k3 = oracle::complete_graph(3);
  CHECK_THROWS_AS(check_lemma22(k3, ConditionParams::relaxed(8), rng), GraphError);
  CHECK_THROWS_AS(check_lemma22(Graph(1), ConditionParams::relaxed(8), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_lemma23(Graph(1), 1.0, ConditionParams::relaxed(8), rng),
                  std::invalid_argument);
}

}
