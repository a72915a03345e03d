#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mspgemm/semiring.hpp"
#include "mspgemm/types.hpp"

namespace mspgemm {

/// Per-key accumulator state. Valid transitions: NotAllowed -> Allowed
/// (set_allowed), Allowed -> Set (insert); remove returns a key to the
/// accumulator's default state.
enum class SlotState : std::uint8_t { NotAllowed, Allowed, Set };

// Accumulator interface shared by the four implementations:
//
//   set_allowed(key)      key may appear in the output
//   insert(key, thunk)    accumulate thunk() into key; thunk is only called
//                         when the key is Allowed or Set
//   mark(key)             symbolic insert: state transition only
//   remove(key)           value if Set, otherwise none; resets the key
//
// Keys are column indices except for McaAccumulator, which is keyed by the
// rank of the column within the mask row.

/// Masked sparse accumulator: dense value/state arrays of length ncols.
///
/// With a complemented mask the default state is Allowed, mask columns are
/// marked with set_not_allowed, and inserted keys are tracked so the gather
/// does not have to scan all ncols entries.
template <Semiring SR>
class MsaAccumulator {
 public:
  using T = typename SR::value_type;

  MsaAccumulator(Index ncols, bool complemented)
      : default_(complemented ? SlotState::Allowed : SlotState::NotAllowed),
        values_(ncols),
        states_(ncols, default_) {}

  bool complemented() const noexcept { return default_ == SlotState::Allowed; }
  SlotState default_state() const noexcept { return default_; }
  SlotState state(Index key) const noexcept { return states_[key]; }
  std::span<const SlotState> states() const noexcept { return states_; }

  void set_allowed(Index key) noexcept { states_[key] = SlotState::Allowed; }
  void set_not_allowed(Index key) noexcept { states_[key] = SlotState::NotAllowed; }

  template <typename Thunk>
  void insert(Index key, Thunk&& thunk) {
    SlotState& s = states_[key];
    if (s == SlotState::Set) {
      values_[key] = SR::add(values_[key], thunk());
    } else if (s == SlotState::Allowed) {
      values_[key] = thunk();
      s = SlotState::Set;
      if (complemented()) inserted_.push_back(key);
    }
  }

  void mark(Index key) {
    SlotState& s = states_[key];
    if (s == SlotState::Allowed) {
      s = SlotState::Set;
      if (complemented()) inserted_.push_back(key);
    }
  }

  std::optional<T> remove(Index key) noexcept {
    SlotState s = states_[key];
    states_[key] = default_;
    if (s == SlotState::Set) return values_[key];
    return std::nullopt;
  }

  /// Keys set since the last drain (complemented mode only), unsorted.
  std::span<const Index> inserted_keys() const noexcept { return inserted_; }

  /// Complemented gather: emits every Set key in ascending order and resets it.
  template <typename Emit>
  void drain_inserted(Emit&& emit) {
    std::sort(inserted_.begin(), inserted_.end());
    for (Index key : inserted_)
      if (auto v = remove(key)) emit(key, *v);
    inserted_.clear();
  }

 private:
  SlotState default_;
  std::vector<T> values_;
  std::vector<SlotState> states_;
  std::vector<Index> inserted_;
};

struct HashStats {
  /// Largest occupied/capacity ratio seen on a non-complemented row.
  double peak_load = 0.0;
  /// Longest probe sequence of any lookup.
  std::uint64_t max_probe = 0;
  /// Rows whose key set outgrew the capacity chosen at begin_row. The table
  /// never rehashes, so this stays zero unless a bound is wrong.
  std::uint64_t overflows = 0;
};

/// Open-addressing hash accumulator with linear probing and no resizing.
/// Each row gets a power-of-two capacity of at least 4x its key bound (load
/// factor 0.25). The impossible key `ncols` marks empty slots.
template <Semiring SR>
class HashAccumulator {
 public:
  using T = typename SR::value_type;

  HashAccumulator(Index ncols, bool complemented)
      : empty_key_(ncols), default_(complemented ? SlotState::Allowed : SlotState::NotAllowed) {}

  static std::size_t capacity_for(std::size_t max_keys) noexcept {
    return std::bit_ceil(std::max<std::size_t>(4 * max_keys, 4));
  }

  /// Prepares the table for a row holding at most `max_keys` distinct keys.
  void begin_row(std::size_t max_keys) {
    capacity_ = capacity_for(max_keys);
    shift_ = 64 - std::countr_zero(capacity_);
    if (slots_.size() < capacity_) slots_.resize(capacity_);
    for (std::size_t s = 0; s < capacity_; ++s) slots_[s].key = empty_key_;
    occupied_ = 0;
    inserted_.clear();
  }

  bool complemented() const noexcept { return default_ == SlotState::Allowed; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t occupied() const noexcept { return occupied_; }
  const HashStats& stats() const noexcept { return stats_; }

  SlotState state(Index key) const noexcept {
    std::size_t s = find(key);
    return slots_[s].key == key ? slots_[s].state : default_;
  }

  void set_allowed(Index key) { claim(key).state = SlotState::Allowed; }
  void set_not_allowed(Index key) { claim(key).state = SlotState::NotAllowed; }

  template <typename Thunk>
  void insert(Index key, Thunk&& thunk) {
    std::size_t s = find(key);
    Slot* slot = &slots_[s];
    if (slot->key != key) {
      if (!complemented()) return;  // never allowed
      slot = &claim_at(s, key);
      slot->state = SlotState::Allowed;
    }
    if (slot->state == SlotState::Set) {
      slot->value = SR::add(slot->value, thunk());
    } else if (slot->state == SlotState::Allowed) {
      slot->value = thunk();
      slot->state = SlotState::Set;
      if (complemented()) inserted_.push_back(key);
    }
  }

  void mark(Index key) {
    std::size_t s = find(key);
    Slot* slot = &slots_[s];
    if (slot->key != key) {
      if (!complemented()) return;
      slot = &claim_at(s, key);
      slot->state = SlotState::Allowed;
    }
    if (slot->state == SlotState::Allowed) {
      slot->state = SlotState::Set;
      if (complemented()) inserted_.push_back(key);
    }
  }

  /// The slot keeps its key after removal so later probe chains stay intact;
  /// begin_row wipes the table.
  std::optional<T> remove(Index key) noexcept {
    std::size_t s = find(key);
    Slot& slot = slots_[s];
    if (slot.key != key) return std::nullopt;
    SlotState st = slot.state;
    slot.state = default_;
    if (st == SlotState::Set) return slot.value;
    return std::nullopt;
  }

  template <typename Emit>
  void drain_inserted(Emit&& emit) {
    std::sort(inserted_.begin(), inserted_.end());
    for (Index key : inserted_)
      if (auto v = remove(key)) emit(key, *v);
    inserted_.clear();
  }

  /// Folds this row's occupancy into the running statistics.
  void end_row() noexcept {
    if (!complemented() && capacity_ > 0)
      stats_.peak_load = std::max(stats_.peak_load, double(occupied_) / double(capacity_));
  }

 private:
  struct Slot {
    Index key;
    SlotState state;
    T value;
  };

  std::size_t hash(Index key) const noexcept {
    return static_cast<std::size_t>((std::uint64_t(key) * 0x9E3779B97F4A7C15ull) >> shift_);
  }

  // Slot holding `key`, or the empty slot that ends its probe chain.
  std::size_t find(Index key) const noexcept {
    std::size_t mask = capacity_ - 1;
    std::size_t s = hash(key);
    std::uint64_t probes = 1;
    while (slots_[s].key != key && slots_[s].key != empty_key_) {
      s = (s + 1) & mask;
      ++probes;
    }
    stats_.max_probe = std::max(stats_.max_probe, probes);
    return s;
  }

  Slot& claim_at(std::size_t s, Index key) {
    if (occupied_ + 1 >= capacity_) {
      ++stats_.overflows;
      throw InternalError("hash accumulator full: key bound for the row was violated");
    }
    ++occupied_;
    slots_[s].key = key;
    return slots_[s];
  }

  Slot& claim(Index key) {
    std::size_t s = find(key);
    if (slots_[s].key == key) return slots_[s];
    return claim_at(s, key);
  }

  Index empty_key_;
  SlotState default_;
  std::vector<Slot> slots_;
  std::size_t capacity_ = 0;
  int shift_ = 64;
  std::size_t occupied_ = 0;
  std::vector<Index> inserted_;
  mutable HashStats stats_;
};

/// Mask compressed accumulator: arrays of length nnz(m) indexed by the rank
/// of a column within the mask row. Only Allowed and Set are needed because
/// every rank corresponds to a mask entry. No complemented variant.
template <Semiring SR>
class McaAccumulator {
 public:
  using T = typename SR::value_type;

  void begin_row(std::size_t mask_nnz) {
    if (states_.size() < mask_nnz) {
      states_.resize(mask_nnz, SlotState::Allowed);
      values_.resize(mask_nnz);
    }
  }

  SlotState state(std::size_t rank) const noexcept { return states_[rank]; }

  template <typename Thunk>
  void insert(std::size_t rank, Thunk&& thunk) {
    if (states_[rank] == SlotState::Set) {
      values_[rank] = SR::add(values_[rank], thunk());
    } else {
      values_[rank] = thunk();
      states_[rank] = SlotState::Set;
    }
  }

  void mark(std::size_t rank) noexcept { states_[rank] = SlotState::Set; }

  std::optional<T> remove(std::size_t rank) noexcept {
    SlotState s = states_[rank];
    states_[rank] = SlotState::Allowed;
    if (s == SlotState::Set) return values_[rank];
    return std::nullopt;
  }

 private:
  std::vector<T> values_;
  std::vector<SlotState> states_;
};

}  // namespace mspgemm
