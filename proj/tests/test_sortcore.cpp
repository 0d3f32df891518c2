#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qslab/costmodel.hpp"
#include "qslab/random.hpp"
#include "qslab/sortcore.hpp"

using namespace qslab;

namespace {

std::vector<Key> to_vector(const InstrumentedArray& arr) {
  return {arr.keys().begin(), arr.keys().end()};
}

std::vector<Key> iota_keys(Index n) {
  std::vector<Key> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Key{1});
  return v;
}

std::vector<SamplingScheme> schemes_for(Algorithm algorithm) {
  if (algorithm == Algorithm::classic) {
    return {SamplingScheme::median(0), SamplingScheme::median(1), SamplingScheme::median(2),
            SamplingScheme::ninther()};
  }
  return {SamplingScheme::tertiles(0), SamplingScheme::tertiles(1), SamplingScheme::tertiles(2)};
}

// Independent plain-vector transcriptions used as references.
Index reference_classic(std::vector<Key>& a, Index left, Index right) {
  const Key p = a[left];
  Index i = left + 1, j = right;
  while (i <= j) {
    if (a[i] < p) { ++i; continue; }
    while (j > i && a[j] > p) --j;
    if (j == i) break;
    std::swap(a[i], a[j]);
    ++i;
    --j;
  }
  std::swap(a[left], a[i - 1]);
  return i - 1;
}

std::pair<Index, Index> reference_dual(std::vector<Key>& a, Index left, Index right) {
  if (a[left] > a[right]) std::swap(a[left], a[right]);
  const Key p = a[left], q = a[right];
  Index l = left + 1, g = right - 1, k = l;
  while (k <= g) {
    if (a[k] < p) {
      std::swap(a[k], a[l]);
      ++l;
    } else if (a[k] >= q) {
      while (a[g] > q && k < g) --g;
      std::swap(a[k], a[g]);
      --g;
      if (a[k] < p) {
        std::swap(a[k], a[l]);
        ++l;
      }
    }
    ++k;
  }
  --l;
  ++g;
  a[left] = a[l];
  a[l] = p;
  a[right] = a[g];
  a[g] = q;
  return {l, g};
}

}  // namespace

TEST_CASE("scheme parsing and formatting") {
  CHECK(parse_scheme("median:1") == SamplingScheme::median(1));
  CHECK(parse_scheme("tertiles:0") == SamplingScheme::tertiles(0));
  CHECK(parse_scheme("ninther") == SamplingScheme::ninther());
  CHECK(to_string(SamplingScheme::tertiles(2)) == "tertiles:2");
  CHECK_THROWS_AS(parse_scheme("median"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scheme("median:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scheme("fifths:1"), std::invalid_argument);
  CHECK(parse_algorithm("dual") == Algorithm::dual_pivot);
  CHECK_THROWS_AS(parse_algorithm("triple"), std::invalid_argument);
  CHECK(SamplingScheme::median(2).sample_size() == 5);
  CHECK(SamplingScheme::tertiles(1).sample_size() == 5);
  CHECK(SamplingScheme::ninther().sample_size() == 9);
  CHECK(compatible(Algorithm::classic, SamplingScheme::ninther()));
  CHECK_FALSE(compatible(Algorithm::dual_pivot, SamplingScheme::ninther()));
  CHECK_FALSE(compatible(Algorithm::classic, SamplingScheme::tertiles(0)));
}

TEST_CASE("fallback to the unsampled scheme below the sample size") {
  CHECK(SamplingScheme::tertiles(1).effective_for(4) == SamplingScheme::tertiles(0));
  CHECK(SamplingScheme::tertiles(1).effective_for(5) == SamplingScheme::tertiles(1));
  CHECK(SamplingScheme::ninther().effective_for(8) == SamplingScheme::median(0));
  CHECK(SamplingScheme::median(1).effective_for(2) == SamplingScheme::median(0));
}

TEST_CASE("sample positions are evenly spaced") {
  CHECK(sample_positions(0, 5, 3) == std::vector<Index>{0, 2, 4});
  CHECK(sample_positions(10, 10, 5) == std::vector<Index>{10, 12, 14, 16, 19});
  CHECK(sample_positions(3, 9, 9) == std::vector<Index>{3, 4, 5, 6, 7, 8, 9, 10, 11});
}

TEST_CASE("dual partition hand-traced example") {
  InstrumentedArray arr({3, 1, 2});
  const auto o = dual_partition(arr, 0, 2);
  CHECK(to_vector(arr) == std::vector<Key>{1, 2, 3});
  CHECK(o.ell == 1);
  CHECK(o.g == 2);
  // min/max of the pivots, then k=1: 1<2
  CHECK(arr.snapshot().comparisons == 2);
}

TEST_CASE("dual partition of two keys leaves them in place") {
  InstrumentedArray arr({1, 2});
  const auto o = dual_partition(arr, 0, 1);
  CHECK(to_vector(arr) == std::vector<Key>{1, 2});
  CHECK(o.ell == 0);
  CHECK(o.g == 1);
}

TEST_CASE("dual partition rejects fewer than two keys") {
  InstrumentedArray arr({1});
  CHECK_THROWS_AS(dual_partition(arr, 0, 0), std::invalid_argument);
}

TEST_CASE("dual partition regions over all permutations of up to 7 keys") {
  for (Index n = 2; n <= 7; ++n) {
    std::vector<Key> perm = iota_keys(n);
    do {
      InstrumentedArray arr(perm);
      const auto o = dual_partition(arr, 0, n - 1);
      const auto a = to_vector(arr);
      const Key p = std::min(perm.front(), perm.back());
      const Key q = std::max(perm.front(), perm.back());
      REQUIRE(a[o.ell] == p);
      REQUIRE(a[o.g] == q);
      for (Index i = 0; i < o.ell; ++i) REQUIRE(a[i] < p);
      for (Index i = o.ell + 1; i < o.g; ++i) REQUIRE((a[i] > p && a[i] < q));
      for (Index i = o.g + 1; i < n; ++i) REQUIRE(a[i] > q);
      if (n == 5) REQUIRE(o.g - o.ell - 1 == q - p - 1);
      auto sorted = a;
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(sorted == iota_keys(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("dual partition regions on random and duplicate-heavy inputs") {
  Rng rng(trial_seed(7, 0));
  for (Index n : {2, 3, 10, 100, 1000, 10000}) {
    for (Index range : {Index{0}, Index{2}, Index{5}}) {
      std::vector<Key> keys = random_permutation(static_cast<std::size_t>(n), rng);
      if (range > 0) {
        for (auto& k : keys) k = 1 + static_cast<Key>(uniform_below(rng, range));
      }
      InstrumentedArray arr(keys);
      const auto o = dual_partition(arr, 0, n - 1);
      const auto a = to_vector(arr);
      const Key p = a[o.ell], q = a[o.g];
      REQUIRE(p <= q);
      for (Index i = 0; i < o.ell; ++i) REQUIRE(a[i] < p);
      for (Index i = o.ell + 1; i < o.g; ++i) REQUIRE((a[i] >= p && a[i] <= q));
      for (Index i = o.g + 1; i < n; ++i) REQUIRE(a[i] >= q);
      auto before = keys, after = a;
      std::sort(before.begin(), before.end());
      std::sort(after.begin(), after.end());
      REQUIRE(before == after);
    }
  }
}

TEST_CASE("dual partition comparison count on distinct keys") {
  // The pivot order check costs one; each of the other n-2 keys is compared
  // with p, maybe with q, and the key swapped in from g once more with p. The
  // crossing key may be tested by the g loop as well.
  for (Index n = 2; n <= 8; ++n) {
    std::vector<Key> perm = iota_keys(n);
    std::uint64_t lo = ~0ull, hi = 0;
    do {
      InstrumentedArray arr(perm);
      dual_partition(arr, 0, n - 1);
      const auto c = arr.snapshot().comparisons - 1;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(lo >= static_cast<std::uint64_t>(n - 2));
    CHECK(hi <= static_cast<std::uint64_t>(2 * (n - 2) + 2));
  }
}

TEST_CASE("classic partition hand-traced example") {
  InstrumentedArray arr({2, 1, 3});
  const auto o = classic_partition(arr, 0, 2);
  CHECK(to_vector(arr) == std::vector<Key>{1, 2, 3});
  CHECK(o.pivot_pos == 1);
}

TEST_CASE("classic partition of a singleton") {
  InstrumentedArray arr({4});
  const auto o = classic_partition(arr, 0, 0);
  CHECK(o.pivot_pos == 0);
  CHECK(arr.snapshot().swaps == 0);
  CHECK_THROWS_AS(classic_partition(arr, 1, 0), std::invalid_argument);
}

TEST_CASE("classic partition of sorted input only places the pivot") {
  for (Index n : {2, 3, 10, 257}) {
    InstrumentedArray arr(iota_keys(n));
    const auto o = classic_partition(arr, 0, n - 1);
    CHECK(o.pivot_pos == 0);
    CHECK(arr.snapshot().swaps == 1);
    CHECK(to_vector(arr) == iota_keys(n));
  }
}

TEST_CASE("classic partition on all permutations of up to 7 keys") {
  for (Index n = 1; n <= 7; ++n) {
    std::vector<Key> perm = iota_keys(n);
    do {
      InstrumentedArray arr(perm);
      const auto o = classic_partition(arr, 0, n - 1);
      const auto a = to_vector(arr);
      REQUIRE(a[o.pivot_pos] == perm.front());
      REQUIRE(o.pivot_pos == perm.front() - 1);
      for (Index i = 0; i < o.pivot_pos; ++i) REQUIRE(a[i] < perm.front());
      for (Index i = o.pivot_pos + 1; i < n; ++i) REQUIRE(a[i] > perm.front());
      const auto c = arr.snapshot();
      REQUIRE(c.comparisons == static_cast<std::uint64_t>(n - 1));
      if (n > 1) {
        REQUIRE(c.scanned_elements >= static_cast<std::uint64_t>(n));
        REQUIRE(c.scanned_elements <= static_cast<std::uint64_t>(n + 2));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("classic partition with duplicates") {
  InstrumentedArray same({5, 5, 5, 5});
  const auto o = classic_partition(same, 0, 3);
  CHECK(o.pivot_pos == 1);

  Rng rng(trial_seed(11, 0));
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(uniform_below(rng, 60));
    std::vector<Key> keys(static_cast<std::size_t>(n));
    for (auto& k : keys) k = static_cast<Key>(uniform_below(rng, 4));
    InstrumentedArray arr(keys);
    const auto r = classic_partition(arr, 0, n - 1);
    const auto a = to_vector(arr);
    for (Index i = 0; i < r.pivot_pos; ++i) REQUIRE(a[i] <= keys.front());
    for (Index i = r.pivot_pos + 1; i < n; ++i) REQUIRE(a[i] >= keys.front());
    REQUIRE(a[r.pivot_pos] == keys.front());
  }
}

TEST_CASE("median of three on the hand example") {
  InstrumentedArray arr({9, 1, 5, 7, 3});
  select_pivots(arr, 0, 4, SamplingScheme::median(1));
  const auto a = to_vector(arr);
  CHECK(a[0] == 5);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<Key>{1, 3, 5, 7, 9});
}

TEST_CASE("tertiles of two order the outer keys with one comparison") {
  InstrumentedArray arr({8, 1, 2, 3});
  select_pivots(arr, 0, 3, SamplingScheme::tertiles(0));
  CHECK(to_vector(arr) == std::vector<Key>{3, 1, 2, 8});
  CHECK(arr.snapshot().comparisons == 1);
  CHECK(arr.snapshot().swaps == 1);

  InstrumentedArray ordered({1, 5, 4, 8});
  select_pivots(ordered, 0, 3, SamplingScheme::tertiles(0));
  CHECK(to_vector(ordered) == std::vector<Key>{1, 5, 4, 8});
  CHECK(ordered.snapshot().swaps == 0);
}

TEST_CASE("sampled pivots are the requested order statistics") {
  Rng rng(trial_seed(3, 0));
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 9 + static_cast<Index>(uniform_below(rng, 40));
    const auto keys = random_permutation(static_cast<std::size_t>(n), rng);
    for (unsigned t : {1u, 2u}) {
      const auto med = SamplingScheme::median(t);
      auto pos = sample_positions(0, n, med.sample_size());
      std::vector<Key> sample;
      for (Index p : pos) sample.push_back(keys[p]);
      std::sort(sample.begin(), sample.end());
      InstrumentedArray arr(keys);
      select_pivots(arr, 0, n - 1, med);
      REQUIRE(arr.keys()[0] == sample[t]);

      const auto ter = SamplingScheme::tertiles(t);
      pos = sample_positions(0, n, ter.sample_size());
      sample.clear();
      for (Index p : pos) sample.push_back(keys[p]);
      std::sort(sample.begin(), sample.end());
      InstrumentedArray arr2(keys);
      select_pivots(arr2, 0, n - 1, ter);
      REQUIRE(arr2.keys()[0] == sample[t]);
      REQUIRE(arr2.keys()[n - 1] == sample[2 * t + 1]);
      auto a = to_vector(arr2);
      std::sort(a.begin(), a.end());
      REQUIRE(a == iota_keys(n));
    }
  }
}

TEST_CASE("ninther matches the median of group medians") {
  Rng rng(trial_seed(5, 0));
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 9 + static_cast<Index>(uniform_below(rng, 30));
    const auto keys = random_permutation(static_cast<std::size_t>(n), rng);
    const auto pos = sample_positions(0, n, 9);
    std::vector<Key> medians;
    for (int g = 0; g < 3; ++g) {
      std::vector<Key> group{keys[pos[3 * g]], keys[pos[3 * g + 1]], keys[pos[3 * g + 2]]};
      std::sort(group.begin(), group.end());
      medians.push_back(group[1]);
    }
    std::sort(medians.begin(), medians.end());
    InstrumentedArray arr(keys);
    select_pivots(arr, 0, n - 1, SamplingScheme::ninther());
    REQUIRE(arr.keys()[0] == medians[1]);
  }
}

TEST_CASE("insertion sort examples") {
  InstrumentedArray two({2, 1});
  insertion_sort(two, 0, 1);
  CHECK(to_vector(two) == std::vector<Key>{1, 2});

  InstrumentedArray three({3, 2, 1});
  insertion_sort(three, 0, 2);
  CHECK(to_vector(three) == std::vector<Key>{1, 2, 3});
  CHECK(three.snapshot().comparisons == 3);

  InstrumentedArray sorted(iota_keys(12));
  insertion_sort(sorted, 0, 11);
  CHECK(sorted.snapshot().comparisons == 11);
  CHECK(sorted.snapshot().swaps == 0);
}

TEST_CASE("quicksort edge cases") {
  InstrumentedArray empty;
  quicksort(empty, Algorithm::dual_pivot, SamplingScheme::tertiles(1));
  CHECK(empty.size() == 0);
  for (const auto alg : {Algorithm::classic, Algorithm::dual_pivot}) {
    for (const auto& s : schemes_for(alg)) {
      InstrumentedArray same({5, 5, 5, 5});
      quicksort(same, alg, s);
      CHECK(to_vector(same) == std::vector<Key>{5, 5, 5, 5});
    }
  }
  InstrumentedArray arr({2, 1});
  CHECK_THROWS_AS(quicksort(arr, Algorithm::dual_pivot, SamplingScheme::ninther()),
                  std::invalid_argument);
}

TEST_CASE("quicksort sorts every permutation of up to 8 keys") {
  for (const auto alg : {Algorithm::classic, Algorithm::dual_pivot}) {
    for (const auto& s : schemes_for(alg)) {
      for (Index n = 0; n <= 8; ++n) {
        std::vector<Key> perm = iota_keys(n);
        do {
          InstrumentedArray arr(perm);
          quicksort(arr, alg, s);
          REQUIRE(to_vector(arr) == iota_keys(n));
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  }
}

TEST_CASE("quicksort on adversarial shapes and duplicates") {
  const Index n = 3000;
  std::vector<std::vector<Key>> inputs;
  inputs.push_back(iota_keys(n));
  inputs.push_back(iota_keys(n));
  std::reverse(inputs.back().begin(), inputs.back().end());
  inputs.emplace_back(n, 7);
  std::vector<Key> organ;
  for (Index i = 0; i < n; ++i) organ.push_back(std::min(i, n - 1 - i));
  inputs.push_back(organ);
  Rng rng(trial_seed(9, 0));
  std::vector<Key> dups(n);
  for (auto& k : dups) k = static_cast<Key>(uniform_below(rng, 3));
  inputs.push_back(dups);

  for (const auto alg : {Algorithm::classic, Algorithm::dual_pivot}) {
    for (const auto& s : schemes_for(alg)) {
      for (const auto& in : inputs) {
        for (Index cutoff : {Index{0}, Index{16}}) {
          InstrumentedArray arr(in);
          quicksort(arr, alg, s, {cutoff, true});
          auto expected = in;
          std::sort(expected.begin(), expected.end());
          REQUIRE(to_vector(arr) == expected);
        }
      }
    }
  }
}

TEST_CASE("plain and instrumented arrays make identical decisions") {
  Rng rng(trial_seed(13, 0));
  for (const auto alg : {Algorithm::classic, Algorithm::dual_pivot}) {
    for (const auto& s : schemes_for(alg)) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto keys = random_permutation(500, rng);
        InstrumentedArray arr(keys);
        auto plain_keys = keys;
        PlainArray plain(plain_keys);
        partition_step(arr, alg, s, 0, 499);
        partition_step(plain, alg, s, 0, 499);
        REQUIRE(to_vector(arr) == plain_keys);
      }
    }
  }
}

TEST_CASE("partitions agree with independent plain transcriptions") {
  Rng rng(trial_seed(17, 0));
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + static_cast<Index>(uniform_below(rng, 200));
    std::vector<Key> keys = random_permutation(static_cast<std::size_t>(n), rng);
    if (trial % 3 == 0) {
      for (auto& k : keys) k = static_cast<Key>(uniform_below(rng, 5));
    }

    auto ref = keys;
    const Index pos = reference_classic(ref, 0, n - 1);
    InstrumentedArray arr(keys);
    const auto o = classic_partition(arr, 0, n - 1);
    REQUIRE(o.pivot_pos == pos);
    REQUIRE(to_vector(arr) == ref);

    auto ref2 = keys;
    const auto [l, g] = reference_dual(ref2, 0, n - 1);
    InstrumentedArray arr2(keys);
    select_pivots(arr2, 0, n - 1, SamplingScheme::tertiles(0));
    const auto d = dual_partition(arr2, 0, n - 1);
    REQUIRE(d.ell == l);
    REQUIRE(d.g == g);
    REQUIRE(to_vector(arr2) == ref2);
  }
}

TEST_CASE("tail-recursion elimination leaves counts unchanged") {
  Rng rng(trial_seed(19, 0));
  for (const auto alg : {Algorithm::classic, Algorithm::dual_pivot}) {
    for (const auto& s : schemes_for(alg)) {
      const auto keys = random_permutation(5000, rng);
      InstrumentedArray plain(keys), looped(keys);
      quicksort(plain, alg, s, {0, false});
      quicksort(looped, alg, s, {0, true});
      CHECK(plain.snapshot() == looped.snapshot());
    }
  }
}
