#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tdecomp/graph.hpp"
#include "tdecomp/rng.hpp"

namespace tdecomp {

enum class Mode { strict, relaxed };

// Multipliers of C * ln n in the five two-colored conditions.
struct Lemma22Multipliers {
  double max_degree = 1.5;      // Delta(G) <= a * C ln n
  double red_min_degree = 0.05;  // delta(G_1) >= a * C ln n
  double blue_min_degree = 0.5;  // delta(G_2) >= a * C ln n
  double blue_expansion = 0.46;  // blue out(X) >= a * C |X| ln n, |X| <= n/2
  double blue_density = 0.05;    // blue in(X) >= a * C n ln n, |X| >= n/2

  static Lemma22Multipliers exact() { return {}; }
  // Desk-scale calibration: two-colored G(n, C ln n / n) with C = 8, n >= 300
  // satisfies these with margin.
  static Lemma22Multipliers desk() { return {2.0, 0.0, 0.25, 0.2, 0.03}; }
};

struct Lemma23Multipliers {
  double max_degree = 1.5;  // Delta <= a * C1 ln n
  double min_degree = 0.4;  // delta >= a * C1 ln n
  double expansion = 0.42;  // out(X) >= a * C1 |X| ln n, |X| <= n/2

  static Lemma23Multipliers exact() { return {}; }
  static Lemma23Multipliers desk() { return {2.0, 0.25, 0.2}; }
};

struct ConditionParams {
  double C = 8.0;
  Mode mode = Mode::relaxed;
  Lemma22Multipliers lemma22 = Lemma22Multipliers::desk();
  Lemma23Multipliers lemma23 = Lemma23Multipliers::desk();
  // Family edge total c; when set, strict reports whether C >= (28c)^30.
  std::optional<std::size_t> family_total;
  // Random subsets drawn per size class beyond the exact tier.
  std::size_t samples_per_size = 24;
  // Graphs with at most this many vertices are checked by full enumeration.
  std::size_t exact_limit = 20;

  static ConditionParams strict(double C) {
    return {C, Mode::strict, Lemma22Multipliers::exact(), Lemma23Multipliers::exact(), {}, 24, 20};
  }
  static ConditionParams relaxed(double C) {
    return {C, Mode::relaxed, Lemma22Multipliers::desk(), Lemma23Multipliers::desk(), {}, 24, 20};
  }
};

enum class Status { pass, fail, heuristic_pass };

struct ConditionResult {
  int index = 0;  // 1-based condition number
  Status status = Status::pass;
  std::vector<Vertex> witness;  // failing vertex or subset
  double threshold = 0.0;
  double observed = 0.0;  // the value measured on the witness (or extremal value)
};

struct ConditionReport {
  std::vector<ConditionResult> results;
  // Strict mode with a family total: whether C meets the (28c)^30 bound.
  std::optional<bool> constant_meets_bound;

  bool all_pass() const;  // pass or heuristic-pass everywhere
  const ConditionResult& condition(int index) const;
};

// Conditions 1-5 on a two-colored graph. Throws GraphError if g is uncolored
// and std::invalid_argument if n < 2.
ConditionReport check_lemma22(const Graph& g, const ConditionParams& params, Rng& rng);
// Condition 1 (both degree bounds) and condition 2 (expansion), uncolored.
ConditionReport check_lemma23(const Graph& g, double C1, const ConditionParams& params, Rng& rng);

std::string to_string(Status s);
// One line per condition: "condition<k> pass|fail|heuristic-pass [witness: v1,v2,...]".
std::string format_report(const ConditionReport& report);

} // namespace tdecomp
