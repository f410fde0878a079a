#include "tdecomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tdecomp/graph.hpp"
#include "tdecomp/verify.hpp"

namespace tdecomp {

AlphaVector sample_alpha(const Family& family, std::size_t edge_count, Rng& rng) {
  const std::size_t k = family.size();
  if (k == 0) {
    throw std::invalid_argument("sample_alpha: empty family");
  }
  if (k == 2 && family.edges(1) == 1) {
    AlphaVector a(2);
    a[0] = static_cast<std::size_t>(rng.below(edge_count / family.edges(0) + 1));
    a[1] = edge_count - a[0] * family.edges(0);
    return a;
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) {
      x = rng.uniform();
      total += x;
    }
    AlphaVector a(k, 0);
    std::size_t used = 0;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = static_cast<std::size_t>(std::floor(w[i] / total * static_cast<double>(edge_count) /
                                                 static_cast<double>(family.edges(i))));
      used += a[i] * family.edges(i);
    }
    if (used > edge_count) {
      continue;
    }
    std::size_t rest = edge_count - used;
    std::vector<std::size_t> fits;
    while (rest > 0) {
      fits.clear();
      for (std::size_t i = 0; i < k; ++i) {
        if (family.edges(i) <= rest) {
          fits.push_back(i);
        }
      }
      if (fits.empty()) {
        break;
      }
      auto i = fits[rng.below(fits.size())];
      ++a[i];
      rest -= family.edges(i);
    }
    if (rest == 0) {
      return a;
    }
  }
  throw std::runtime_error("sample_alpha: no feasible alpha found");
}

std::vector<SweepRow> threshold_sweep(const SweepConfig& cfg) {
  if (cfg.trials == 0 || cfg.grid.empty()) {
    throw std::invalid_argument("threshold_sweep: need trials >= 1 and a nonempty grid");
  }
  const bool h_k2 = cfg.family.size() == 2 && cfg.family.edges(1) == 1;
  const double log_n = std::log(static_cast<double>(cfg.n));
  const Rng root(cfg.seed);
  std::vector<SweepRow> rows;
  for (std::size_t cell = 0; cell < cfg.grid.size(); ++cell) {
    SweepRow row;
    row.cprime = cfg.grid[cell];
    row.trials = cfg.trials;
    const double p = std::clamp(row.cprime * log_n / static_cast<double>(cfg.n), 0.0, 1.0);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = root.split({cell, trial});
      Graph g = gen_colored_gnp(cfg.n, p, rng);
      bool isolated = false;
      for (Vertex v = 0; v < g.n(); ++v) {
        isolated = isolated || g.degree(v) == 0;
      }
      row.trivial_obstructions += isolated ? 1 : 0;
      AlphaVector alpha;
      if (h_k2) {
        const std::size_t h = cfg.family.edges(0);
        const std::size_t top = g.m() / h;
        const std::size_t slack = static_cast<std::size_t>(rng.below(cfg.max_slack + 1));
        alpha = {top - std::min(top, slack), 0};
        alpha[1] = g.m() - alpha[0] * h;
      } else {
        alpha = sample_alpha(cfg.family, g.m(), rng);
      }
      TotalParams params = cfg.params;
      params.cprime = row.cprime;
      bool ok = false;
      try {
        Rng run = rng.split(0xdec0);
        auto result = decompose_total(g, cfg.family, alpha, params, run);
        ok = verify_decomposition(g, cfg.family, alpha, result.decomposition).empty();
      } catch (const TotalDecompositionFailed&) {
        ok = false;
      }
      row.successes += ok ? 1 : 0;
      row.failures_with_obstruction += (!ok && isolated) ? 1 : 0;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "Cprime,trials,successes,trivial_obstructions\n";
  for (const auto& r : rows) {
    out << r.cprime << ',' << r.trials << ',' << r.successes << ',' << r.trivial_obstructions
        << '\n';
  }
}

double divisibility_experiment(std::size_t n, double p, std::size_t h, std::size_t trials,
                               std::uint64_t seed) {
  if (h == 0 || trials == 0) {
    throw std::invalid_argument("divisibility_experiment: need h >= 1 and trials >= 1");
  }
  const Rng root(seed);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = root.split(t);
    hits += gen_gnp(n, p, rng).m() % h == 0 ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

} // namespace tdecomp
