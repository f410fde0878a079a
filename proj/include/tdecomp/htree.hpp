#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdecomp/conditions.hpp"
#include "tdecomp/graph.hpp"
#include "tdecomp/rng.hpp"
#include "tdecomp/tree.hpp"

namespace tdecomp {

// Stage failures of the H-decomposition engine. Retry loops catch these.
class StageFailure : public std::runtime_error {
public:
  StageFailure(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

class PartitionFailed : public StageFailure {
public:
  explicit PartitionFailed(const std::string& what) : StageFailure("partition", what) {}
};

class OrientationFailed : public StageFailure {
public:
  explicit OrientationFailed(const std::string& what) : StageFailure("orientation", what) {}
};

class MendStuck : public StageFailure {
public:
  explicit MendStuck(const std::string& what) : StageFailure("mend", what) {}
};

class DecompositionFailed : public std::runtime_error {
public:
  DecompositionFailed(const std::string& what, std::map<std::string, std::size_t> histogram)
      : std::runtime_error(what), histogram_(std::move(histogram)) {}
  const std::map<std::string, std::size_t>& histogram() const { return histogram_; }

private:
  std::map<std::string, std::size_t> histogram_;
};

// Receives "stage=<name> attempt=<k> status=<ok|fail> detail=<...>" lines.
using TraceSink = std::function<void(const std::string&)>;

struct FeasiblePartition {
  std::size_t h = 0;
  std::size_t m = 0;
  std::vector<std::vector<EdgeId>> classes;
  std::vector<std::size_t> class_of;             // per edge id
  std::vector<std::vector<std::size_t>> degree;  // degree[i][v] = d_i(v)
  // max over (i, v) of |d_i(v) - d(v)/h| / (d(v)/h^2), the balance ratio
  // the feasibility bound compares against epsilon.
  double max_balance_ratio = 0.0;
  // max over (i, v) of |d_i(v) - d(v)/h| in edges.
  double max_balance_deviation = 0.0;
  std::size_t attempts = 0;
};

struct PartitionOptions {
  Mode mode = Mode::relaxed;
  double epsilon = 0.05;
  std::size_t max_attempts = 64;
  // Relaxed mode: pairwise Euler-split rounds applied after the random split
  // to even out d_i(v) while keeping every class at exactly m edges.
  std::size_t rebalance_rounds = 4;
};

// Random (h+1)-way labelling (label 0 with probability n^{-1/2}), then label-0
// edges pad every class to exactly m. Throws std::invalid_argument when h does
// not divide e(G), PartitionFailed when the retry budget runs out (or, in
// strict mode, when the balance bound cannot be met).
FeasiblePartition feasible_partition(const Graph& g, std::size_t h, const PartitionOptions& options,
                                     Rng& rng);

struct DirectedEdge {
  Vertex tail;
  Vertex head;
  EdgeId edge;
  bool operator==(const DirectedEdge&) const = default;
};

// Orientation with |d+(v) - d-(v)| <= 1 everywhere: odd-degree vertices are
// paired by virtual edges and each component is walked along an Euler circuit.
std::vector<DirectedEdge> eulerian_orientation(const Graph& g, const std::vector<EdgeId>& edges,
                                               Rng* rng = nullptr);

struct FeasibleOrientation {
  std::size_t n = 0;
  std::vector<std::vector<DirectedEdge>> arcs;    // arcs[i] = E*_i
  std::vector<std::vector<std::size_t>> out_deg;  // out_deg[i][v] = d+_i(v)
  std::vector<std::vector<std::size_t>> in_deg;   // in_deg[i][v] = d-_i(v)
};

// E*_1 Eulerian; for each later slot i, E_i is oriented so d+_i(v) = d-_{p(i)}(v)
// through a perfect matching between E_i and vertex copies. Throws
// OrientationFailed when no perfect matching exists.
FeasibleOrientation feasible_orientation(const Graph& g, const FeasiblePartition& partition,
                                         const RootedTree& rooted, Rng& rng);

// m members, each holding one arc per slot. Slot i's arc leaves the head of
// slot parent[i]'s arc. bad[c*h+i] marks arcs whose head already occurs in
// slots 0..i-1 of the same member.
struct ClassSet {
  std::size_t m = 0;
  std::size_t h = 0;
  std::vector<DirectedEdge> members;  // members[c*h + i]
  std::vector<std::uint8_t> bad;

  const DirectedEdge& at(std::size_t c, std::size_t i) const { return members[c * h + i]; }
  bool is_bad(std::size_t c, std::size_t i) const { return bad[c * h + i] != 0; }
  std::size_t bad_count() const;
  std::size_t bad_count(std::size_t c) const;
  // Distinct vertices spanned by member c.
  std::size_t vertex_count(std::size_t c) const;
};

// Recomputes the bad flags of member c from scratch.
void refresh_bad(ClassSet& cs, std::size_t c);

// Uniform random perfect matchings B_i(v) between D-_{p(i)}(v) and D+_i(v);
// members are the classes of the transitive closure.
ClassSet build_class_set(const FeasibleOrientation& orientation, const RootedTree& rooted,
                         Rng& rng);

struct ClassSetDiagnostics {
  std::size_t max_n = 0;  // max |N(v,i,j)|
  std::size_t max_l = 0;  // max |L([u,j],[v,i])|, only when computed over all pairs
  bool l_computed = false;
};

// |N(v,i,j)|: members whose slot-i arc leaves v and whose slot-j arc is bad (i <= j).
std::size_t n_count(const ClassSet& cs, Vertex v, std::size_t i, std::size_t j);
// |L([u,j],[v,i])| with positions 0..h: position 0 is the root tail (the D-_0 := D+_1
// convention), position k >= 1 is the head of slot k-1. Requires j < i.
std::size_t l_count(const ClassSet& cs, Vertex u, std::size_t j, Vertex v, std::size_t i);
// Global maxima; the L maximum is computed only when n <= l_limit.
ClassSetDiagnostics diagnostics(const ClassSet& cs, std::size_t n, std::size_t l_limit = 500);

struct MendOptions {
  Mode mode = Mode::relaxed;
};

struct MendStats {
  std::size_t initial_bad = 0;
  std::size_t swaps = 0;
  std::size_t strict_swaps = 0;     // T^beta met all three requirements, from L_1
  std::size_t disjoint_swaps = 0;  // requirement 3 only
  std::size_t local_swaps = 0;     // direct bad-count check, slot i or an ancestor
  std::vector<std::size_t> bad_trace;  // bad count before the first and after every swap
  std::size_t eq10_violations = 0;     // (v, i) with c(v,i) < d+_i(v)/(h+1)
};

// Swaps descendant subgraphs between members until no bad arcs remain. Every
// accepted swap strictly lowers the bad count; throws MendStuck when no valid
// partner exists. Strict mode accepts only partners from L_1 with c(T) = i that
// share no vertex besides v; relaxed mode falls back to any partner sharing no
// vertex besides v, then to any swap that lowers the bad count directly.
ClassSet mend(ClassSet cs, const RootedTree& rooted, const MendOptions& options, Rng& rng,
              MendStats* stats = nullptr);

struct HParams {
  Mode mode = Mode::relaxed;
  std::size_t retries = 16;
  std::size_t color_retries = 2;
  std::size_t matching_retries = 2;
  std::size_t orientation_retries = 4;
  PartitionOptions partition{};
  TraceSink trace{};
};

struct HDecomposition {
  RootedTree rooted;
  // Host edge ids of each copy, in slot order.
  std::vector<std::vector<EdgeId>> classes;
  // slot_edge[i] = index into rooted.base.edges() of the tree edge behind slot i.
  std::vector<std::size_t> slot_edge;
  std::map<std::string, std::size_t> histogram;  // stage failures before success
  std::size_t attempts = 0;
  MendStats mend;
  double max_balance_ratio = 0.0;
  ClassSetDiagnostics initial_diagnostics;
};

// Decomposes g into e(g)/e(H) copies of H. Root is the lowest-id leaf of H.
// Throws std::invalid_argument unless e(H) divides e(g); DecompositionFailed
// once the retries are exhausted.
HDecomposition decompose_H(const Graph& g, const Tree& H, const HParams& params, Rng& rng);

} // namespace tdecomp
