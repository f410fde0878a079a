#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdecomp/conditions.hpp"
#include "tdecomp/decomposition.hpp"
#include "tdecomp/graph.hpp"
#include "tdecomp/htree.hpp"
#include "tdecomp/rng.hpp"
#include "tdecomp/tree.hpp"

namespace tdecomp {

// A failed pipeline phase; phase() is "greedy-red", "gpp" or "htree".
class PhaseFailure : public std::runtime_error {
public:
  PhaseFailure(std::string phase, const std::string& what)
      : std::runtime_error(what), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

private:
  std::string phase_;
};

class GreedyPhaseFailed : public PhaseFailure {
public:
  explicit GreedyPhaseFailed(const std::string& what) : PhaseFailure("greedy-red", what) {}
};

class GppFailed : public PhaseFailure {
public:
  explicit GppFailed(const std::string& what) : PhaseFailure("gpp", what) {}
};

// Raised once the whole-pipeline retries are used up.
class TotalDecompositionFailed : public std::runtime_error {
public:
  TotalDecompositionFailed(const std::string& what, std::string last_phase,
                           std::map<std::string, std::size_t> histogram)
      : std::runtime_error(what), last_phase_(std::move(last_phase)),
        histogram_(std::move(histogram)) {}
  const std::string& last_phase() const { return last_phase_; }
  const std::map<std::string, std::size_t>& histogram() const { return histogram_; }

private:
  std::string last_phase_;
  std::map<std::string, std::size_t> histogram_;
};

// Throws std::invalid_argument unless alpha has one entry per member and
// sum alpha_i h_i = e(G).
void check_feasible(const Family& family, const AlphaVector& alpha, std::size_t edge_count);

struct FamilySplit {
  std::vector<std::size_t> f1;  // alpha_i < m / (20 c^2): rare members
  std::vector<std::size_t> f2;
};

FamilySplit split_family(const Family& family, const AlphaVector& alpha, std::size_t edge_count);

struct GreedyTask {
  std::size_t family_index;
  std::size_t count;
};

// Embeds the requested copies on red edges of g that are not yet used, marking
// them in `used`. An uncolored graph counts as entirely blue.
std::vector<DecompClass> greedy_red_phase(const Graph& g, const Family& family,
                                          const std::vector<GreedyTask>& tasks, EdgeMask& used,
                                          Rng& rng, int attempts = 64);

// t_i = floor(2000 c^2 alpha_i / sum alpha) in exact arithmetic. Strict mode
// throws std::domain_error unless every t_i lies in [100, 2000 c^2].
std::vector<std::uint64_t> compute_ti(const std::vector<std::uint64_t>& alpha, std::uint64_t c,
                                      Mode mode = Mode::relaxed);

struct QPlan {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> b;
  bool clamped = false;  // relaxed mode lowered q to keep every b_i >= 0
};

// q = floor(0.99 |E'| / h), b_i = alpha_i - t_i q. Strict mode throws
// std::domain_error when some b_i would be negative.
QPlan plan_q_b(std::uint64_t e_prime, std::uint64_t h, const std::vector<std::uint64_t>& t,
               const std::vector<std::uint64_t>& alpha, Mode mode = Mode::relaxed);

struct RelaxedChoice {
  std::vector<std::uint64_t> t;
  QPlan plan;
  std::uint64_t h = 0;
  std::uint64_t gpp_edges = 0;  // sum b_i h_i
};

// Desk-scale replacement for compute_ti: among all t >= 0 with
// 1 <= h = sum t_i h_i <= h_max, the one leaving the fewest edges for G''
// (ties go to the smaller h). A member with t_i = 0 is placed in G'' entirely.
RelaxedChoice choose_relaxed_t(const std::vector<std::uint64_t>& alpha,
                               const std::vector<std::uint64_t>& sizes, std::uint64_t e_prime,
                               std::uint64_t h_max);

struct GppRequest {
  std::size_t family_index;
  std::size_t count;
};

struct GppResult {
  EdgeMask mask;  // edges of G''
  std::vector<DecompClass> classes;
  std::size_t max_degree = 0;
};

// Embeds the requested copies into the unused edges of g, each copy inside
// the ceil(n/2) vertices of smallest current G''-degree, keeping
// Delta(G'') <= cap. Requests are processed smallest tree first. Throws GppFailed.
GppResult build_gpp(const Graph& g, const EdgeMask& used, const Family& family,
                    std::vector<GppRequest> requests, std::size_t cap, Rng& rng,
                    int attempts = 64);

struct TotalParams {
  Mode mode = Mode::relaxed;
  double cprime = 8.0;  // the graph is assumed to be G(n, cprime ln n / n)
  std::size_t retries = 8;
  // Relaxed mode: upper bound on e(H) for the concatenated tree.
  std::uint64_t h_max = 12;
  // Relaxed mode: Delta(G'') <= gpp_cap_multiplier * cprime * ln n.
  double gpp_cap_multiplier = 0.5;
  HParams engine{};
  TraceSink trace{};
};

struct TotalReport {
  FamilySplit split;
  std::vector<std::uint64_t> t;  // per f2 entry
  std::uint64_t h = 0;
  std::uint64_t q = 0;
  std::vector<std::uint64_t> b;  // per f2 entry
  bool q_clamped = false;
  std::size_t e_prime = 0;
  std::size_t gpp_edges = 0;
  std::size_t gpp_cap = 0;
  std::size_t gpp_max_degree = 0;
  std::size_t gstar_edges = 0;
  std::size_t attempts = 0;
  std::map<std::string, std::size_t> histogram;  // phase failures before success
  MendStats mend;
};

struct TotalResult {
  Decomposition decomposition;
  TotalReport report;
};

// Full pipeline. Throws std::invalid_argument for infeasible alpha and
// TotalDecompositionFailed once params.retries attempts have failed.
TotalResult decompose_total(const Graph& g, const Family& family, const AlphaVector& alpha,
                            const TotalParams& params, Rng& rng);

} // namespace tdecomp
