#ifndef QSLAB_COSTMODEL_HPP
#define QSLAB_COSTMODEL_HPP

// Instrumented key array.
//
// Every access to a key goes through a named cursor (the reified index
// variable of the algorithm text). A scanned element is counted once per
// (cursor, position) pair: repeated accesses through the same cursor at an
// unchanged position count as one, reads and writes are not distinguished,
// and different cursors touching the same position each pay.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qslab {

using Key = std::int64_t;
using Index = std::ptrdiff_t;

struct CostCounters {
  std::uint64_t comparisons = 0;
  std::uint64_t swaps = 0;
  std::uint64_t scanned_elements = 0;
  std::uint64_t partition_calls = 0;

  friend bool operator==(const CostCounters&, const CostCounters&) = default;
  CostCounters& operator+=(const CostCounters& other);
};

CostCounters operator-(const CostCounters& a, const CostCounters& b);

class InstrumentedArray;

// Lightweight handle to a cursor record owned by an InstrumentedArray.
// Copies alias the same record. A handle becomes stale once its scope ends.
class Cursor {
 public:
  Index position() const;
  void seek(Index position);
  void advance() { seek(position() + 1); }
  void retreat() { seek(position() - 1); }
  std::string_view name() const;

 private:
  friend class InstrumentedArray;
  Cursor(InstrumentedArray* owner, std::uint32_t slot, std::uint64_t epoch)
      : owner_(owner), slot_(slot), epoch_(epoch) {}

  InstrumentedArray* owner_;
  std::uint32_t slot_;
  std::uint64_t epoch_;
};

class InstrumentedArray {
 public:
  using Cursor = qslab::Cursor;

  InstrumentedArray() = default;
  explicit InstrumentedArray(std::vector<Key> keys) : keys_(std::move(keys)) {}

  InstrumentedArray(const InstrumentedArray&) = delete;
  InstrumentedArray& operator=(const InstrumentedArray&) = delete;
  InstrumentedArray(InstrumentedArray&&) = default;
  InstrumentedArray& operator=(InstrumentedArray&&) = default;

  Index size() const { return static_cast<Index>(keys_.size()); }

  // Ends the current cursor scope. All cursors become stale and names are
  // free again. begin_partition additionally counts one partitioning step.
  void begin_scope();
  void begin_partition();

  // Throws std::logic_error if `name` is already active in this scope.
  Cursor cursor(std::string_view name, Index position);
  std::size_t active_cursors() const { return records_.size(); }

  Key read(const Cursor& c);
  void write(const Cursor& c, Key key);
  void swap(const Cursor& a, const Cursor& b);
  // A[dst] <- A[src]; A[src] <- key. Pivot placement; counts one swap.
  void place(const Cursor& dst, const Cursor& src, Key key);

  bool less(Key a, Key b) { ++counters_.comparisons; return a < b; }
  bool less_equal(Key a, Key b) { ++counters_.comparisons; return a <= b; }
  bool greater(Key a, Key b) { ++counters_.comparisons; return a > b; }
  bool greater_equal(Key a, Key b) { ++counters_.comparisons; return a >= b; }

  CostCounters snapshot() const { return counters_; }
  void reset() { counters_ = {}; }

  // Uninstrumented view for verification only; not used by the sorters.
  std::span<const Key> keys() const { return keys_; }
  std::vector<Key> release() && { return std::move(keys_); }

 private:
  friend class qslab::Cursor;

  struct CursorRecord {
    std::string name;
    Index position;
    Index last_counted;  // -1 when nothing counted yet
  };

  CursorRecord& record(const Cursor& c);
  const CursorRecord& record(const Cursor& c) const;
  Index touch(const Cursor& c);
  [[noreturn]] static void throw_stale_cursor();
  [[noreturn]] void throw_out_of_bounds(const CursorRecord& rec) const;

  std::vector<Key> keys_;
  std::vector<CursorRecord> records_;
  std::uint64_t epoch_ = 0;
  CostCounters counters_;
};

// Same interface with all accounting compiled out. Used for wall-clock runs
// and as the non-instrumented twin in non-interference checks.
class PlainArray {
 public:
  class Cursor {
   public:
    Index position() const { return pos_; }
    void seek(Index position) { pos_ = position; }
    void advance() { ++pos_; }
    void retreat() { --pos_; }

   private:
    friend class PlainArray;
    explicit Cursor(Index pos) : pos_(pos) {}
    Index pos_;
  };

  explicit PlainArray(std::span<Key> keys) : keys_(keys) {}

  Index size() const { return static_cast<Index>(keys_.size()); }
  void begin_scope() {}
  void begin_partition() {}
  Cursor cursor(std::string_view, Index position) { return Cursor(position); }

  Key read(const Cursor& c) const { return keys_[static_cast<std::size_t>(c.pos_)]; }
  void write(const Cursor& c, Key key) { keys_[static_cast<std::size_t>(c.pos_)] = key; }
  void swap(const Cursor& a, const Cursor& b) {
    std::swap(keys_[static_cast<std::size_t>(a.pos_)], keys_[static_cast<std::size_t>(b.pos_)]);
  }
  void place(const Cursor& dst, const Cursor& src, Key key) {
    keys_[static_cast<std::size_t>(dst.pos_)] = keys_[static_cast<std::size_t>(src.pos_)];
    keys_[static_cast<std::size_t>(src.pos_)] = key;
  }

  static bool less(Key a, Key b) { return a < b; }
  static bool less_equal(Key a, Key b) { return a <= b; }
  static bool greater(Key a, Key b) { return a > b; }
  static bool greater_equal(Key a, Key b) { return a >= b; }

 private:
  std::span<Key> keys_;
};

template <class A>
concept CostArray = requires(A arr, const typename A::Cursor& c, typename A::Cursor m, Key k) {
  { arr.size() } -> std::convertible_to<Index>;
  arr.begin_scope();
  arr.begin_partition();
  { arr.cursor(std::string_view{}, Index{}) } -> std::same_as<typename A::Cursor>;
  { arr.read(c) } -> std::same_as<Key>;
  arr.write(c, k);
  arr.swap(c, c);
  arr.place(c, c, k);
  { arr.less(k, k) } -> std::same_as<bool>;
  { arr.less_equal(k, k) } -> std::same_as<bool>;
  { arr.greater(k, k) } -> std::same_as<bool>;
  { arr.greater_equal(k, k) } -> std::same_as<bool>;
  { c.position() } -> std::convertible_to<Index>;
  m.seek(Index{});
  m.advance();
  m.retreat();
};

// Hot path, kept inline.

inline InstrumentedArray::CursorRecord& InstrumentedArray::record(const Cursor& c) {
  if (c.owner_ != this || c.epoch_ != epoch_) throw_stale_cursor();
  return records_[c.slot_];
}

inline const InstrumentedArray::CursorRecord& InstrumentedArray::record(const Cursor& c) const {
  if (c.owner_ != this || c.epoch_ != epoch_) throw_stale_cursor();
  return records_[c.slot_];
}

inline Index InstrumentedArray::touch(const Cursor& c) {
  CursorRecord& rec = record(c);
  if (rec.position < 0 || rec.position >= size()) throw_out_of_bounds(rec);
  if (rec.position != rec.last_counted) {
    rec.last_counted = rec.position;
    ++counters_.scanned_elements;
  }
  return rec.position;
}

inline Key InstrumentedArray::read(const Cursor& c) {
  return keys_[static_cast<std::size_t>(touch(c))];
}

inline void InstrumentedArray::write(const Cursor& c, Key key) {
  keys_[static_cast<std::size_t>(touch(c))] = key;
}

inline void InstrumentedArray::swap(const Cursor& a, const Cursor& b) {
  const auto i = static_cast<std::size_t>(touch(a));
  const auto j = static_cast<std::size_t>(touch(b));
  std::swap(keys_[i], keys_[j]);
  ++counters_.swaps;
}

inline void InstrumentedArray::place(const Cursor& dst, const Cursor& src, Key key) {
  const auto i = static_cast<std::size_t>(touch(dst));
  const auto j = static_cast<std::size_t>(touch(src));
  keys_[i] = keys_[j];
  keys_[j] = key;
  ++counters_.swaps;
}

inline Index Cursor::position() const { return owner_->record(*this).position; }
inline void Cursor::seek(Index position) { owner_->record(*this).position = position; }
inline std::string_view Cursor::name() const { return owner_->record(*this).name; }

}  // namespace qslab

#endif  // QSLAB_COSTMODEL_HPP
