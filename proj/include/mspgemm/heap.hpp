#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mspgemm/csr.hpp"
#include "mspgemm/semiring.hpp"

namespace mspgemm {

/// NInspect value that scans the mask until a match or exhaustion (HeapDot).
inline constexpr std::size_t kInspectAll = std::numeric_limits<std::size_t>::max();

/// Position inside row B_{k*}, tagged with the slot of u_k in the input row.
struct RowCursor {
  Offset pos;
  Offset end;
  Index u_slot;

  bool valid() const noexcept { return pos < end; }
};

/// Binary min-heap of row cursors ordered by the column they point at.
class CursorHeap {
 public:
  explicit CursorHeap(std::span<const Index> b_cols) : cols_(b_cols) {}

  void clear() noexcept { heap_.clear(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  std::size_t peak_size() const noexcept { return peak_; }
  void reset_peak() noexcept { peak_ = 0; }

  Index column(const RowCursor& c) const noexcept { return cols_[c.pos]; }

  void push(RowCursor c) {
    heap_.push_back(c);
    std::push_heap(heap_.begin(), heap_.end(), Greater{cols_});
    peak_ = std::max(peak_, heap_.size());
  }

  RowCursor pop() {
    std::pop_heap(heap_.begin(), heap_.end(), Greater{cols_});
    RowCursor c = heap_.back();
    heap_.pop_back();
    return c;
  }

 private:
  struct Greater {
    std::span<const Index> cols;
    bool operator()(const RowCursor& a, const RowCursor& b) const noexcept { return cols[a.pos] > cols[b.pos]; }
  };

  std::span<const Index> cols_;
  std::vector<RowCursor> heap_;
  std::size_t peak_ = 0;
};

/// Pushes `cursor` after optionally inspecting up to `n_inspect` mask
/// entries starting at `mask_pos`. Row entries left of the current mask
/// column are skipped; if the row runs past the end of the mask, or the
/// mask runs out, the cursor is dropped. `mask_pos` is a private copy: the
/// caller's mask position does not move.
///
/// Returns whether the cursor was pushed.
inline bool heap_insert(CursorHeap& heap, RowCursor cursor, std::span<const Index> mask, std::size_t mask_pos,
                        std::size_t n_inspect) {
  if (!cursor.valid()) return false;
  if (n_inspect == 0) {
    heap.push(cursor);
    return true;
  }
  std::size_t to_inspect = n_inspect;
  while (cursor.valid() && mask_pos < mask.size()) {
    Index col = heap.column(cursor);
    if (col == mask[mask_pos]) {
      heap.push(cursor);
      return true;
    }
    if (col < mask[mask_pos]) {
      ++cursor.pos;
    } else {
      ++mask_pos;
      if (--to_inspect == 0) {
        heap.push(cursor);
        return true;
      }
    }
  }
  return false;
}

/// Masked SpGEVM by multiway merge: v = m ⊙ (u·B), or (¬m) ⊙ (u·B) when
/// `complemented`. Output entries are emitted in ascending column order;
/// equal consecutive columns are summed before emission. Complemented masks
/// force n_inspect to 0.
///
/// With kNumeric = false only the output columns are produced (symbolic).
template <Semiring SR, bool kNumeric = true, typename Emit, typename OnMultiply>
void heap_spgevm(CursorHeap& heap, std::span<const Index> mask, bool complemented, std::span<const Index> u_cols,
                 std::span<const typename SR::value_type> u_vals, const CsrMatrix<typename SR::value_type>& b,
                 std::size_t n_inspect, Emit&& emit, OnMultiply&& on_multiply) {
  using T = typename SR::value_type;
  heap.clear();
  if (complemented) n_inspect = 0;
  if (!complemented && mask.empty()) return;

  const auto b_vals = b.values();
  std::size_t mask_pos = 0;
  for (std::size_t s = 0; s < u_cols.size(); ++s) {
    Index k = u_cols[s];
    heap_insert(heap, RowCursor{b.row_begin(k), b.row_end(k), static_cast<Index>(s)}, mask, mask_pos, n_inspect);
  }

  std::optional<Index> prev;
  T acc{};
  auto product = [&](const RowCursor& c) -> T {
    on_multiply();
    return SR::multiply(u_vals[c.u_slot], b_vals[c.pos]);
  };

  while (!heap.empty()) {
    RowCursor top = heap.pop();
    Index col = heap.column(top);
    while (mask_pos < mask.size() && mask[mask_pos] < col) ++mask_pos;
    bool in_mask = mask_pos < mask.size() && mask[mask_pos] == col;
    if (!complemented && mask_pos == mask.size()) break;

    if (in_mask != complemented) {
      if (prev == col) {
        if constexpr (kNumeric) acc = SR::add(acc, product(top));
      } else {
        if (prev) emit(*prev, acc);
        prev = col;
        if constexpr (kNumeric) acc = product(top);
      }
    }
    ++top.pos;
    heap_insert(heap, top, mask, mask_pos, n_inspect);
  }
  if (prev) emit(*prev, acc);
}

}  // namespace mspgemm
