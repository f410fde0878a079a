#include "tdecomp/matching.hpp"

#include <limits>
#include <queue>

namespace tdecomp {

std::vector<std::size_t> max_bipartite_matching(
    std::size_t right_count, const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t left_count = adjacency.size();
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> match_left(left_count, unmatched);
  std::vector<std::size_t> match_right(right_count, unmatched);
  std::vector<std::size_t> dist(left_count, inf);

  auto bfs = [&]() {
    std::queue<std::size_t> q;
    bool reachable_free = false;
    for (std::size_t l = 0; l < left_count; ++l) {
      if (match_left[l] == unmatched) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = inf;
      }
    }
    while (!q.empty()) {
      auto l = q.front();
      q.pop();
      for (auto r : adjacency[l]) {
        auto next = match_right[r];
        if (next == unmatched) {
          reachable_free = true;
        } else if (dist[next] == inf) {
          dist[next] = dist[l] + 1;
          q.push(next);
        }
      }
    }
    return reachable_free;
  };

  // Iterative layered DFS; it[l] remembers how far l's adjacency was scanned.
  std::vector<std::size_t> it(left_count, 0);
  std::vector<std::size_t> stack;
  auto dfs = [&](std::size_t root) {
    stack.assign(1, root);
    while (!stack.empty()) {
      auto l = stack.back();
      if (it[l] == adjacency[l].size()) {
        dist[l] = inf;
        stack.pop_back();
        if (!stack.empty()) {
          ++it[stack.back()];
        }
        continue;
      }
      auto r = adjacency[l][it[l]];
      auto next = match_right[r];
      if (next == unmatched) {
        // Flip the alternating path recorded on the stack.
        for (auto ls : stack) {
          auto rs = adjacency[ls][it[ls]];
          match_left[ls] = rs;
          match_right[rs] = ls;
        }
        return true;
      }
      if (dist[next] != inf && dist[next] == dist[l] + 1) {
        stack.push_back(next);
      } else {
        ++it[l];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (std::size_t l = 0; l < left_count; ++l) {
      if (match_left[l] == unmatched) {
        dfs(l);
      }
    }
  }
  return match_left;
}

} // namespace tdecomp
