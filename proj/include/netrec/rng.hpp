#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace netrec {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t fnv1a(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Independent generator derived from (master seed, stream label).
inline Rng make_stream(std::uint64_t master_seed, std::string_view label) {
  const std::uint64_t key = fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Rng(seq);
}

/// One generator per stochastic phase of a trajectory. Phases never share a
/// generator, so switching the intervention on or off cannot shift the
/// draws seen by natural growth.
struct StreamSet {
  Rng init;
  Rng arrival;
  Rng strangers;
  Rng friends;
  Rng recommender;
  Rng behavior;
  Rng attrition;
  Rng assignment;

  explicit StreamSet(std::uint64_t seed)
      : init(make_stream(seed, "init")),
        arrival(make_stream(seed, "arrival")),
        strangers(make_stream(seed, "strangers")),
        friends(make_stream(seed, "friends")),
        recommender(make_stream(seed, "recommender")),
        behavior(make_stream(seed, "behavior")),
        attrition(make_stream(seed, "attrition")),
        assignment(make_stream(seed, "assignment")) {}
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// k distinct elements of `pool`, uniformly, in draw order (partial Fisher-Yates).
template <class T>
std::vector<T> sample_without_replacement(std::span<const T> pool, std::size_t k, Rng& rng) {
  std::vector<T> work(pool.begin(), pool.end());
  if (k > work.size()) k = work.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, work.size() - i);
    std::swap(work[i], work[j]);
  }
  work.resize(k);
  return work;
}

}  // namespace netrec
