#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tdecomp {

inline constexpr std::size_t unmatched = static_cast<std::size_t>(-1);

// Maximum bipartite matching by Hopcroft-Karp. adjacency[l] lists the right
// vertices adjacent to left vertex l. Returns match[l] (or unmatched).
std::vector<std::size_t> max_bipartite_matching(std::size_t right_count,
                                                 const std::vector<std::vector<std::size_t>>& adjacency);

} // namespace tdecomp
