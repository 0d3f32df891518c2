#include "qslab/costmodel.hpp"

#include <algorithm>
#include <stdexcept>

namespace qslab {

CostCounters& CostCounters::operator+=(const CostCounters& other) {
  comparisons += other.comparisons;
  swaps += other.swaps;
  scanned_elements += other.scanned_elements;
  partition_calls += other.partition_calls;
  return *this;
}

CostCounters operator-(const CostCounters& a, const CostCounters& b) {
  return {a.comparisons - b.comparisons, a.swaps - b.swaps,
          a.scanned_elements - b.scanned_elements, a.partition_calls - b.partition_calls};
}

void InstrumentedArray::begin_scope() {
  records_.clear();
  ++epoch_;
}

void InstrumentedArray::begin_partition() {
  begin_scope();
  ++counters_.partition_calls;
}

Cursor InstrumentedArray::cursor(std::string_view name, Index position) {
  const bool taken = std::any_of(records_.begin(), records_.end(),
                                 [&](const CursorRecord& r) { return r.name == name; });
  if (taken) {
    throw std::logic_error("cursor '" + std::string(name) + "' already active in this scope");
  }
  records_.push_back({std::string(name), position, -1});
  return Cursor(this, static_cast<std::uint32_t>(records_.size() - 1), epoch_);
}

void InstrumentedArray::throw_stale_cursor() {
  throw std::logic_error("cursor used outside the scope that created it");
}

void InstrumentedArray::throw_out_of_bounds(const CursorRecord& rec) const {
  throw std::out_of_range("cursor '" + rec.name + "' at position " +
                          std::to_string(rec.position) + " outside [0, " +
                          std::to_string(size()) + ")");
}

}  // namespace qslab
