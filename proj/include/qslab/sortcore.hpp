#ifndef QSLAB_SORTCORE_HPP
#define QSLAB_SORTCORE_HPP

// Classic (crossing-pointer) and Yaroslavskiy dual-pivot Quicksort with
// pivot sampling. All key traffic goes through a CostArray, so the same code
// runs instrumented (InstrumentedArray) or bare (PlainArray).

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qslab/costmodel.hpp"

namespace qslab {

enum class Algorithm { classic, dual_pivot };

std::string to_string(Algorithm algorithm);
// Accepts "classic" and "dual". Throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view text);

class SamplingScheme {
 public:
  enum class Kind { classic_median, dual_tertiles, ninther };

  // Median of 2t+1.
  static SamplingScheme median(unsigned t) { return {Kind::classic_median, t}; }
  // (t+1)-st and (2t+2)-nd order statistics of 3t+2.
  static SamplingScheme tertiles(unsigned t) { return {Kind::dual_tertiles, t}; }
  // Median of the medians of three groups of three.
  static SamplingScheme ninther() { return {Kind::ninther, 0}; }

  Kind kind() const { return kind_; }
  unsigned t() const { return t_; }
  Index sample_size() const;

  // Scheme actually used on a subarray of `size` elements: the unsampled
  // variant of the same family when the sample does not fit.
  SamplingScheme effective_for(Index size) const;

  friend bool operator==(const SamplingScheme&, const SamplingScheme&) = default;

 private:
  SamplingScheme(Kind kind, unsigned t) : kind_(kind), t_(t) {}
  Kind kind_;
  unsigned t_;
};

std::string to_string(const SamplingScheme& scheme);
// Accepts "median:T", "tertiles:T" and "ninther".
SamplingScheme parse_scheme(std::string_view text);
// Classic sorts with median/ninther, dual-pivot with tertiles.
bool compatible(Algorithm algorithm, const SamplingScheme& scheme);

// Evenly spaced sample positions left + floor(i*(size-1)/(m-1)).
std::vector<Index> sample_positions(Index left, Index size, Index sample_size);

struct SinglePivotOutcome {
  Index pivot_pos;
};

struct DualPivotOutcome {
  Index ell;
  Index g;
};

struct Segment {
  Index left;
  Index right;
  Index size() const { return right - left + 1; }
};

struct Segments {
  std::array<Segment, 3> ranges{};
  int count = 0;
};

struct SortOptions {
  // Subarrays of at most this many elements go to insertion sort; 0 = off.
  Index insertion_cutoff = 0;
  // Recurse into the smaller segments and loop on the largest one.
  bool eliminate_tail_recursion = false;
};

namespace detail {

template <CostArray A, class PositionOf>
void insertion_sort_by(A& arr, typename A::Cursor& cur, typename A::Cursor& prev,
                       std::size_t count, PositionOf position_of) {
  for (std::size_t i = 1; i < count; ++i) {
    for (std::size_t j = i; j > 0; --j) {
      cur.seek(position_of(j));
      prev.seek(position_of(j - 1));
      if (!arr.less(arr.read(cur), arr.read(prev))) break;
      arr.swap(cur, prev);
    }
  }
}

template <CostArray A>
void sort_sample(A& arr, typename A::Cursor& cur, typename A::Cursor& prev,
                 const std::vector<Index>& positions, std::size_t first, std::size_t count) {
  insertion_sort_by(arr, cur, prev, count,
                    [&](std::size_t j) { return positions[first + j]; });
}

template <CostArray A>
void move_to(A& arr, typename A::Cursor& target, typename A::Cursor& source, Index from,
             Index to) {
  if (from == to) return;
  target.seek(to);
  source.seek(from);
  arr.swap(target, source);
}

}  // namespace detail

template <CostArray A>
void insertion_sort(A& arr, Index left, Index right) {
  if (right - left < 1) return;
  arr.begin_scope();
  auto cur = arr.cursor("j", left);
  auto prev = arr.cursor("j-1", left);
  detail::insertion_sort_by(arr, cur, prev, static_cast<std::size_t>(right - left + 1),
                            [left](std::size_t j) { return left + static_cast<Index>(j); });
}

// Moves the chosen pivot(s) into place: classic pivot at `left`, dual pivots
// at `left` and `right` (smaller at `left`). Only swaps move keys.
template <CostArray A>
void select_pivots(A& arr, Index left, Index right, const SamplingScheme& scheme) {
  const Index size = right - left + 1;
  const SamplingScheme effective = scheme.effective_for(size);
  const Index m = effective.sample_size();
  if (m < 2) return;

  arr.begin_scope();
  const std::vector<Index> pos = sample_positions(left, size, m);
  auto cur = arr.cursor("sample", left);
  auto prev = arr.cursor("sample-1", left);
  auto target = arr.cursor("target", left);
  auto source = arr.cursor("source", left);
  const auto t = static_cast<std::size_t>(effective.t());

  switch (effective.kind()) {
    case SamplingScheme::Kind::classic_median:
      detail::sort_sample(arr, cur, prev, pos, 0, pos.size());
      detail::move_to(arr, target, source, pos[t], left);
      break;
    case SamplingScheme::Kind::dual_tertiles:
      detail::sort_sample(arr, cur, prev, pos, 0, pos.size());
      detail::move_to(arr, target, source, pos[t], left);
      detail::move_to(arr, target, source, pos[2 * t + 1], right);
      break;
    case SamplingScheme::Kind::ninther: {
      for (std::size_t group = 0; group < 3; ++group) {
        detail::sort_sample(arr, cur, prev, pos, 3 * group, 3);
      }
      const std::vector<Index> medians{pos[1], pos[4], pos[7]};
      detail::sort_sample(arr, cur, prev, medians, 0, 3);
      detail::move_to(arr, target, source, pos[4], left);
      break;
    }
  }
}

// Crossing-pointer partition around the pivot at `left`. Positions left of
// i are known <= pivot, right of j known >= pivot; every other key is
// compared exactly once, so distinct keys cost right - left comparisons.
// Keys equal to the pivot stop both pointers and get exchanged.
template <CostArray A>
SinglePivotOutcome classic_partition(A& arr, Index left, Index right) {
  if (right < left) throw std::invalid_argument("classic_partition: empty range");
  if (right == left) return {left};

  arr.begin_partition();
  auto lc = arr.cursor("left", left);
  const Key pivot = arr.read(lc);
  auto i = arr.cursor("i", left + 1);
  auto j = arr.cursor("j", right);
  while (i.position() <= j.position()) {
    if (arr.less(arr.read(i), pivot)) {
      i.advance();
      continue;
    }
    while (j.position() > i.position() && arr.greater(arr.read(j), pivot)) j.retreat();
    if (j.position() == i.position()) break;
    arr.swap(i, j);
    i.advance();
    j.retreat();
  }
  i.retreat();
  arr.swap(lc, i);
  return {i.position()};
}

// Yaroslavskiy's partitioning, line for line. Pivots are the keys at `left`
// and `right`.
template <CostArray A>
DualPivotOutcome dual_partition(A& arr, Index left, Index right) {
  if (right - left < 1) throw std::invalid_argument("dual_partition: needs at least two keys");

  arr.begin_partition();
  auto lc = arr.cursor("left", left);
  auto rc = arr.cursor("right", right);
  const Key a = arr.read(lc);
  const Key b = arr.read(rc);
  const bool ordered = arr.less_equal(a, b);
  const Key p = ordered ? a : b;
  const Key q = ordered ? b : a;

  auto ell = arr.cursor("ell", left + 1);
  auto g = arr.cursor("g", right - 1);
  auto k = arr.cursor("k", left + 1);
  while (k.position() <= g.position()) {
    if (arr.less(arr.read(k), p)) {
      arr.swap(k, ell);
      ell.advance();
    } else if (arr.greater_equal(arr.read(k), q)) {
      while (arr.greater(arr.read(g), q) && k.position() < g.position()) g.retreat();
      arr.swap(k, g);
      g.retreat();
      if (arr.less(arr.read(k), p)) {
        arr.swap(k, ell);
        ell.advance();
      }
    }
    k.advance();
  }
  ell.retreat();
  g.advance();
  arr.place(lc, ell, p);
  arr.place(rc, g, q);
  return {ell.position(), g.position()};
}

// One partitioning step (sampling included) on A[left..right], right > left.
template <CostArray A>
Segments partition_step(A& arr, Algorithm algorithm, const SamplingScheme& scheme, Index left,
                        Index right) {
  select_pivots(arr, left, right, scheme);
  Segments out;
  if (algorithm == Algorithm::classic) {
    const auto o = classic_partition(arr, left, right);
    out.ranges[0] = {left, o.pivot_pos - 1};
    out.ranges[1] = {o.pivot_pos + 1, right};
    out.count = 2;
  } else {
    const auto o = dual_partition(arr, left, right);
    out.ranges[0] = {left, o.ell - 1};
    out.ranges[1] = {o.ell + 1, o.g - 1};
    out.ranges[2] = {o.g + 1, right};
    out.count = 3;
  }
  return out;
}

namespace detail {

template <CostArray A>
void sort_range(A& arr, Algorithm algorithm, const SamplingScheme& scheme,
                const SortOptions& options, Index left, Index right) {
  for (;;) {
    const Index size = right - left + 1;
    if (size <= options.insertion_cutoff) {
      insertion_sort(arr, left, right);
      return;
    }
    if (size < 2) return;

    const Segments segs = partition_step(arr, algorithm, scheme, left, right);
    if (!options.eliminate_tail_recursion) {
      for (int s = 0; s < segs.count; ++s) {
        sort_range(arr, algorithm, scheme, options, segs.ranges[s].left, segs.ranges[s].right);
      }
      return;
    }
    int largest = 0;
    for (int s = 1; s < segs.count; ++s) {
      if (segs.ranges[s].size() > segs.ranges[largest].size()) largest = s;
    }
    for (int s = 0; s < segs.count; ++s) {
      if (s != largest) {
        sort_range(arr, algorithm, scheme, options, segs.ranges[s].left, segs.ranges[s].right);
      }
    }
    left = segs.ranges[largest].left;
    right = segs.ranges[largest].right;
  }
}

}  // namespace detail

// Throws std::invalid_argument for an incompatible algorithm/scheme pair.
template <CostArray A>
void quicksort(A& arr, Algorithm algorithm, const SamplingScheme& scheme,
               const SortOptions& options = {}) {
  if (!compatible(algorithm, scheme)) {
    throw std::invalid_argument("scheme " + to_string(scheme) + " cannot drive " +
                                to_string(algorithm) + " quicksort");
  }
  if (arr.size() < 2) return;
  detail::sort_range(arr, algorithm, scheme, options, 0, arr.size() - 1);
}

}  // namespace qslab

#endif  // QSLAB_SORTCORE_HPP
