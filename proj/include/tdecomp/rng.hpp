#pragma once

#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <random>
#include <utility>

namespace tdecomp {

// Seedable generator handed explicitly to every randomized operation.
// Streams derived with split() are independent of the parent's draw count.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform double in [0, 1).
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  Rng split(std::uint64_t stream) const;
  Rng split(std::initializer_list<std::uint64_t> path) const;

  template <class It>
  void shuffle(It first, It last) {
    auto n = std::distance(first, last);
    for (auto i = n - 1; i > 0; --i) {
      auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i) + 1));
      using std::swap;
      swap(*(first + i), *(first + j));
    }
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

} // namespace tdecomp
