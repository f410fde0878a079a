#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tdecomp/decomposition.hpp"
#include "tdecomp/rng.hpp"
#include "tdecomp/total.hpp"
#include "tdecomp/tree.hpp"

namespace tdecomp {

// Random feasible alpha with sum alpha_i h_i = edge_count. Two-member
// families whose second member is K2 draw alpha_1 uniformly from
// [0, floor(m / h_1)]; otherwise random shares are floored and the remainder
// is filled by randomized change-making, rejecting dead ends. Throws
// std::runtime_error if no feasible vector turns up.
AlphaVector sample_alpha(const Family& family, std::size_t edge_count, Rng& rng);

struct SweepConfig {
  std::size_t n = 500;
  Family family;  // {H, K2}
  std::vector<double> grid{0.2, 0.5, 1, 2, 4, 8};
  std::size_t trials = 30;
  std::uint64_t seed = 1;
  // Slack subtracted from floor(e / h) for alpha_H, uniform in [0, max_slack].
  std::size_t max_slack = 3;
  TotalParams params{};
};

struct SweepRow {
  double cprime = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t trivial_obstructions = 0;  // graphs with an isolated vertex
  std::size_t failures_with_obstruction = 0;
};

// Trial t of cell c draws from its own stream (seed, c, t). A success is a
// decomposition that verify_decomposition accepts.
std::vector<SweepRow> threshold_sweep(const SweepConfig& cfg);

// "Cprime,trials,successes,trivial_obstructions" plus one row per cell.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Fraction of trials in which e(G(n, p)) is divisible by h.
double divisibility_experiment(std::size_t n, double p, std::size_t h, std::size_t trials,
                               std::uint64_t seed);

} // namespace tdecomp
