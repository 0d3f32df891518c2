#ifndef QSLAB_RANDOM_HPP
#define QSLAB_RANDOM_HPP

// Reproducible randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard (the 10000th draw from the default
// seed 5489 is 9981545732273789042). Bounded draws and shuffles are done
// here rather than through std::uniform_int_distribution, whose algorithm is
// implementation-defined.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qslab/costmodel.hpp"

namespace qslab {

using Rng = std::mt19937_64;

// Uniform integer in [0, bound), bound > 0. Rejection on the low tail keeps
// it exactly unbiased: reject r < 2^64 mod bound, return r mod bound.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of trial `trial` under base seed `seed`:
// mix64(seed + (trial + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// Fisher-Yates, i from size-1 down to 1, j = uniform_below(i + 1).
void shuffle(std::span<Key> keys, Rng& rng);

// Random permutation of 1..n.
std::vector<Key> random_permutation(std::size_t n, Rng& rng);

}  // namespace qslab

#endif  // QSLAB_RANDOM_HPP
