#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdecomp/decomposition.hpp"
#include "tdecomp/graph.hpp"
#include "tdecomp/tree.hpp"

namespace tdecomp {

enum class ViolationKind {
  overlap,
  coverage_gap,
  wrong_size,
  not_a_tree,
  wrong_isomorphism_type,
  count_mismatch,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  // Class position in the decomposition; for count-mismatch, the family index.
  std::optional<std::size_t> class_index;
  std::vector<Edge> edges;

  // "<kind>: class=<i> edges=<u-v,...>"
  std::string to_string() const;
};

// Empty result means the decomposition is valid.
std::vector<Violation> verify_decomposition(const Graph& g, const Family& family,
                                            const AlphaVector& alpha, const Decomposition& d);

class OracleGuardExceeded : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t packing_edge_limit = 16;
inline constexpr std::size_t total_edge_limit = 12;

// Maximum number of pairwise edge-disjoint copies of h in g.
std::size_t brute_force_packing(const Graph& g, const Tree& h);

// Whether g splits into exactly alpha_i copies of each member.
bool brute_force_total(const Graph& g, const Family& family, const AlphaVector& alpha);

} // namespace tdecomp
