#pragma once

#include <algorithm>
#include <span>

#include "mspgemm/accumulators.hpp"
#include "mspgemm/csr.hpp"
#include "mspgemm/heap.hpp"
#include "mspgemm/semiring.hpp"

// Row kernels v = m ⊙ (u·B). Each kernel emits (column, value) pairs in
// ascending column order through `emit`, and calls `on_multiply` once per
// semiring multiply it actually performs. With kNumeric = false the value
// passed to `emit` is meaningless and no multiply is performed.

namespace mspgemm {

/// Number of products u·B generates: Σ over u's nonzeros of nnz(B_{k*}).
template <typename T>
Offset row_flops(std::span<const Index> u_cols, const CsrMatrix<T>& b) noexcept {
  Offset f = 0;
  for (Index k : u_cols) f += b.row_nnz(k);
  return f;
}

template <Semiring SR, bool kNumeric = true, typename Emit, typename OnMultiply>
void msa_spgevm(MsaAccumulator<SR>& acc, std::span<const Index> mask, std::span<const Index> u_cols,
                std::span<const typename SR::value_type> u_vals, const CsrMatrix<typename SR::value_type>& b,
                Emit&& emit, OnMultiply&& on_multiply) {
  const bool complemented = acc.complemented();
  if (!complemented && mask.empty()) return;
  if (complemented)
    for (Index j : mask) acc.set_not_allowed(j);
  else
    for (Index j : mask) acc.set_allowed(j);

  for (std::size_t s = 0; s < u_cols.size(); ++s) {
    const Index k = u_cols[s];
    const auto cols = b.row_cols(k);
    const auto vals = b.row_values(k);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if constexpr (kNumeric)
        acc.insert(cols[p], [&] {
          on_multiply();
          return SR::multiply(u_vals[s], vals[p]);
        });
      else
        acc.mark(cols[p]);
    }
  }

  if (complemented) {
    acc.drain_inserted(emit);
    for (Index j : mask) acc.remove(j);
  } else {
    for (Index j : mask)
      if (auto v = acc.remove(j)) emit(j, *v);
  }
}

/// `max_keys` bounds the distinct keys of this row: nnz(m) for a plain mask,
/// min(nnz(m) + flops(uB), ncols) for a complemented one.
template <Semiring SR, bool kNumeric = true, typename Emit, typename OnMultiply>
void hash_spgevm(HashAccumulator<SR>& acc, std::span<const Index> mask, std::size_t max_keys,
                 std::span<const Index> u_cols, std::span<const typename SR::value_type> u_vals,
                 const CsrMatrix<typename SR::value_type>& b, Emit&& emit, OnMultiply&& on_multiply) {
  const bool complemented = acc.complemented();
  if (!complemented && mask.empty()) return;
  acc.begin_row(max_keys);
  if (complemented)
    for (Index j : mask) acc.set_not_allowed(j);
  else
    for (Index j : mask) acc.set_allowed(j);

  for (std::size_t s = 0; s < u_cols.size(); ++s) {
    const Index k = u_cols[s];
    const auto cols = b.row_cols(k);
    const auto vals = b.row_values(k);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if constexpr (kNumeric)
        acc.insert(cols[p], [&] {
          on_multiply();
          return SR::multiply(u_vals[s], vals[p]);
        });
      else
        acc.mark(cols[p]);
    }
  }

  if (complemented) {
    acc.drain_inserted(emit);
  } else {
    for (Index j : mask)
      if (auto v = acc.remove(j)) emit(j, *v);
  }
  acc.end_row();
}

/// Mask ranks are found by a merge scan of the mask against each B row, so
/// the cost is O(nnz(u)·nnz(m) + flops). Plain masks only.
template <Semiring SR, bool kNumeric = true, typename Emit, typename OnMultiply>
void mca_spgevm(McaAccumulator<SR>& acc, std::span<const Index> mask, std::span<const Index> u_cols,
                std::span<const typename SR::value_type> u_vals, const CsrMatrix<typename SR::value_type>& b,
                Emit&& emit, OnMultiply&& on_multiply) {
  if (mask.empty()) return;
  acc.begin_row(mask.size());
  for (std::size_t s = 0; s < u_cols.size(); ++s) {
    const Index k = u_cols[s];
    const auto cols = b.row_cols(k);
    const auto vals = b.row_values(k);
    std::size_t p = 0;
    for (std::size_t rank = 0; rank < mask.size() && p < cols.size(); ++rank) {
      const Index j = mask[rank];
      while (p < cols.size() && cols[p] < j) ++p;
      if (p < cols.size() && cols[p] == j) {
        if constexpr (kNumeric)
          acc.insert(rank, [&] {
            on_multiply();
            return SR::multiply(u_vals[s], vals[p]);
          });
        else
          acc.mark(rank);
      }
    }
  }
  for (std::size_t rank = 0; rank < mask.size(); ++rank)
    if (auto v = acc.remove(rank)) emit(mask[rank], *v);
}

/// Sparse dot product of A_{i*} with B_{*j} by merging the two sorted index
/// lists. Returns false when the lists do not intersect.
template <Semiring SR, bool kNumeric = true, typename OnMultiply>
bool sparse_dot(std::span<const Index> a_cols, std::span<const typename SR::value_type> a_vals,
                std::span<const Index> b_rows, std::span<const typename SR::value_type> b_vals,
                typename SR::value_type& out, OnMultiply&& on_multiply) {
  std::size_t p = 0, q = 0;
  bool hit = false;
  while (p < a_cols.size() && q < b_rows.size()) {
    if (a_cols[p] < b_rows[q]) {
      ++p;
    } else if (b_rows[q] < a_cols[p]) {
      ++q;
    } else {
      if constexpr (!kNumeric) return true;
      on_multiply();
      auto prod = SR::multiply(a_vals[p], b_vals[q]);
      out = hit ? SR::add(out, prod) : prod;
      hit = true;
      ++p;
      ++q;
    }
  }
  return hit;
}

}  // namespace mspgemm
