#include "qslab/random.hpp"

#include <numeric>
#include <utility>

namespace qslab {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t reject_below = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= reject_below) return r % bound;
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

void shuffle(std::span<Key> keys, Rng& rng) {
  for (std::size_t i = keys.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(keys[i - 1], keys[j]);
  }
}

std::vector<Key> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Key> keys(n);
  std::iota(keys.begin(), keys.end(), Key{1});
  shuffle(keys, rng);
  return keys;
}

}  // namespace qslab
