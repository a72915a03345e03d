#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mspgemm/types.hpp"

namespace mspgemm {

template <typename T>
struct Triple {
  Index row;
  Index col;
  T value;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Compressed sparse row matrix in canonical form: every row holds strictly
/// increasing column indices. All constructors enforce the canonical form,
/// and the object is immutable afterwards.
template <typename T>
class CsrMatrix {
 public:
  using value_type = T;

  CsrMatrix() : row_ptr_(1, 0) {}

  /// Empty nrows x ncols matrix.
  CsrMatrix(Index nrows, Index ncols) : nrows_(nrows), ncols_(ncols), row_ptr_(Offset(nrows) + 1, 0) {}

  /// Adopts raw CSR arrays. Rows may be unsorted (they are sorted here), but a
  /// row must not repeat a column.
  CsrMatrix(Index nrows, Index ncols, std::vector<Offset> row_ptr, std::vector<Index> col_idx,
            std::vector<T> values)
      : nrows_(nrows),
        ncols_(ncols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    validate_and_sort();
  }

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Offset nnz() const noexcept { return row_ptr_.back(); }

  std::span<const Offset> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const T> values() const noexcept { return values_; }

  Offset row_begin(Index i) const noexcept { return row_ptr_[i]; }
  Offset row_end(Index i) const noexcept { return row_ptr_[i + 1]; }
  Offset row_nnz(Index i) const noexcept { return row_ptr_[i + 1] - row_ptr_[i]; }

  std::span<const Index> row_cols(Index i) const noexcept {
    return {col_idx_.data() + row_ptr_[i], static_cast<std::size_t>(row_nnz(i))};
  }
  std::span<const T> row_values(Index i) const noexcept {
    return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_nnz(i))};
  }

  std::vector<Triple<T>> triples() const {
    std::vector<Triple<T>> out;
    out.reserve(nnz());
    for (Index i = 0; i < nrows_; ++i)
      for (Offset p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out.push_back({i, col_idx_[p], values_[p]});
    return out;
  }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  void validate_and_sort() {
    if (row_ptr_.size() != Offset(nrows_) + 1) throw ConstructionError("row_ptr must have nrows+1 entries");
    if (row_ptr_.front() != 0) throw ConstructionError("row_ptr[0] must be 0");
    for (Index i = 0; i < nrows_; ++i)
      if (row_ptr_[i + 1] < row_ptr_[i]) throw ConstructionError("row_ptr must be non-decreasing");
    if (row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size())
      throw ConstructionError("row_ptr[nrows] must equal the number of stored entries");
    for (Index c : col_idx_)
      if (c >= ncols_) throw ConstructionError("column index out of range");

    std::vector<Offset> perm;
    for (Index i = 0; i < nrows_; ++i) {
      auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
      auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
      if (!std::is_sorted(first, last)) {
        Offset len = row_ptr_[i + 1] - row_ptr_[i];
        perm.resize(len);
        std::iota(perm.begin(), perm.end(), row_ptr_[i]);
        std::sort(perm.begin(), perm.end(), [&](Offset a, Offset b) { return col_idx_[a] < col_idx_[b]; });
        std::vector<Index> cols(len);
        std::vector<T> vals(len);
        for (Offset k = 0; k < len; ++k) {
          cols[k] = col_idx_[perm[k]];
          vals[k] = values_[perm[k]];
        }
        std::copy(cols.begin(), cols.end(), first);
        std::copy(vals.begin(), vals.end(), values_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]));
      }
      if (std::adjacent_find(first, last) != last) throw ConstructionError("duplicate column within a row");
    }
  }

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Offset> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<T> values_;
};

/// Compressed sparse column matrix; the column-major mirror of CsrMatrix.
template <typename T>
class CscMatrix {
 public:
  using value_type = T;

  CscMatrix() : col_ptr_(1, 0) {}

  CscMatrix(Index nrows, Index ncols, std::vector<Offset> col_ptr, std::vector<Index> row_idx,
            std::vector<T> values)
      : nrows_(nrows),
        ncols_(ncols),
        col_ptr_(std::move(col_ptr)),
        row_idx_(std::move(row_idx)),
        values_(std::move(values)) {
    // The column-major layout of an m x n matrix is the row-major layout of
    // its n x m transpose, so reuse the CSR validation.
    CsrMatrix<T> check(ncols_, nrows_, std::move(col_ptr_), std::move(row_idx_), std::move(values_));
    col_ptr_.assign(check.row_ptr().begin(), check.row_ptr().end());
    row_idx_.assign(check.col_idx().begin(), check.col_idx().end());
    values_.assign(check.values().begin(), check.values().end());
  }

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Offset nnz() const noexcept { return col_ptr_.back(); }

  std::span<const Offset> col_ptr() const noexcept { return col_ptr_; }
  std::span<const Index> row_idx() const noexcept { return row_idx_; }
  std::span<const T> values() const noexcept { return values_; }

  std::span<const Index> col_rows(Index j) const noexcept {
    return {row_idx_.data() + col_ptr_[j], static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
  }
  std::span<const T> col_values(Index j) const noexcept {
    return {values_.data() + col_ptr_[j], static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
  }

  friend bool operator==(const CscMatrix&, const CscMatrix&) = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Offset> col_ptr_;
  std::vector<Index> row_idx_;
  std::vector<T> values_;
};

/// Pattern-only view of a canonical CSR structure plus a complement flag.
/// Does not own its arrays; the viewed matrix must outlive the view.
class MaskView {
 public:
  MaskView() = default;

  template <typename T>
  explicit MaskView(const CsrMatrix<T>& pattern, bool complemented = false)
      : nrows_(pattern.nrows()),
        ncols_(pattern.ncols()),
        row_ptr_(pattern.row_ptr()),
        col_idx_(pattern.col_idx()),
        complemented_(complemented) {}

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Offset nnz() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.back(); }
  bool complemented() const noexcept { return complemented_; }

  std::span<const Index> row(Index i) const noexcept {
    return col_idx_.subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }

  MaskView complement() const noexcept {
    MaskView m = *this;
    m.complemented_ = !m.complemented_;
    return m;
  }

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::span<const Offset> row_ptr_;
  std::span<const Index> col_idx_;
  bool complemented_ = false;
};

/// Builds a canonical CSR from coordinate triples, combining duplicate
/// positions with `add` in input order.
template <typename T, typename Add = std::plus<T>>
CsrMatrix<T> from_triples(Index nrows, Index ncols, std::span<const Triple<T>> triples, Add add = {}) {
  std::vector<Offset> counts(Offset(nrows) + 1, 0);
  for (const auto& t : triples) {
    if (t.row >= nrows || t.col >= ncols)
      throw ConstructionError("triple (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                              ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // Bucket by row, then stable-sort each row by column so duplicates combine
  // in their input order.
  std::vector<Offset> order(triples.size());
  {
    std::vector<Offset> next(counts.begin(), counts.end() - 1);
    for (Offset k = 0; k < triples.size(); ++k) order[next[triples[k].row]++] = k;
  }

  std::vector<Offset> row_ptr(Offset(nrows) + 1, 0);
  std::vector<Index> cols;
  std::vector<T> vals;
  cols.reserve(triples.size());
  vals.reserve(triples.size());
  for (Index i = 0; i < nrows; ++i) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::stable_sort(first, last, [&](Offset a, Offset b) { return triples[a].col < triples[b].col; });
    for (auto it = first; it != last; ++it) {
      const auto& t = triples[*it];
      if (cols.size() > row_ptr[i] && cols.back() == t.col)
        vals.back() = add(vals.back(), t.value);
      else {
        cols.push_back(t.col);
        vals.push_back(t.value);
      }
    }
    row_ptr[i + 1] = cols.size();
  }
  return CsrMatrix<T>(nrows, ncols, std::move(row_ptr), std::move(cols), std::move(vals));
}

template <typename T, typename Add = std::plus<T>>
CsrMatrix<T> from_triples(Index nrows, Index ncols, const std::vector<Triple<T>>& triples, Add add = {}) {
  return from_triples<T, Add>(nrows, ncols, std::span<const Triple<T>>(triples), add);
}

namespace detail {

// Counting-sort transpose of raw CSR arrays. Output rows come out sorted
// because input rows are visited in increasing order.
template <typename T>
void transpose_arrays(Index nrows, Index ncols, std::span<const Offset> ptr, std::span<const Index> idx,
                      std::span<const T> val, std::vector<Offset>& out_ptr, std::vector<Index>& out_idx,
                      std::vector<T>& out_val) {
  out_ptr.assign(Offset(ncols) + 1, 0);
  for (Index c : idx) ++out_ptr[c + 1];
  std::partial_sum(out_ptr.begin(), out_ptr.end(), out_ptr.begin());
  out_idx.resize(idx.size());
  out_val.resize(idx.size());
  std::vector<Offset> next(out_ptr.begin(), out_ptr.end() - 1);
  for (Index i = 0; i < nrows; ++i)
    for (Offset p = ptr[i]; p < ptr[i + 1]; ++p) {
      Offset dst = next[idx[p]]++;
      out_idx[dst] = i;
      out_val[dst] = val[p];
    }
}

}  // namespace detail

template <typename T>
CscMatrix<T> to_csc(const CsrMatrix<T>& a) {
  std::vector<Offset> ptr;
  std::vector<Index> idx;
  std::vector<T> val;
  detail::transpose_arrays(a.nrows(), a.ncols(), a.row_ptr(), a.col_idx(), a.values(), ptr, idx, val);
  return CscMatrix<T>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

template <typename T>
CsrMatrix<T> to_csr(const CscMatrix<T>& a) {
  std::vector<Offset> ptr;
  std::vector<Index> idx;
  std::vector<T> val;
  detail::transpose_arrays(a.ncols(), a.nrows(), a.col_ptr(), a.row_idx(), a.values(), ptr, idx, val);
  return CsrMatrix<T>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

template <typename T>
CsrMatrix<T> transpose(const CsrMatrix<T>& a) {
  std::vector<Offset> ptr;
  std::vector<Index> idx;
  std::vector<T> val;
  detail::transpose_arrays(a.nrows(), a.ncols(), a.row_ptr(), a.col_idx(), a.values(), ptr, idx, val);
  return CsrMatrix<T>(a.ncols(), a.nrows(), std::move(ptr), std::move(idx), std::move(val));
}

/// Keeps entries satisfying pred(row, col, value).
template <typename T, typename Pred>
CsrMatrix<T> select(const CsrMatrix<T>& a, Pred pred) {
  std::vector<Offset> ptr(Offset(a.nrows()) + 1, 0);
  std::vector<Index> idx;
  std::vector<T> val;
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (pred(i, cols[p], vals[p])) {
        idx.push_back(cols[p]);
        val.push_back(vals[p]);
      }
    ptr[i + 1] = idx.size();
  }
  return CsrMatrix<T>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

/// Strictly lower-triangular part (col < row) of a square matrix.
template <typename T>
CsrMatrix<T> tril_strict(const CsrMatrix<T>& a) {
  if (a.nrows() != a.ncols()) throw DimensionError("tril_strict requires a square matrix");
  return select(a, [](Index i, Index j, const T&) { return j < i; });
}

template <typename T>
CsrMatrix<T> diagonal(const CsrMatrix<T>& a) {
  return select(a, [](Index i, Index j, const T&) { return j == i; });
}

/// Same pattern, every stored value replaced by `one`.
template <typename U, typename T>
CsrMatrix<U> pattern_cast(const CsrMatrix<T>& a, U one = U(1)) {
  std::vector<Offset> ptr(a.row_ptr().begin(), a.row_ptr().end());
  std::vector<Index> idx(a.col_idx().begin(), a.col_idx().end());
  std::vector<U> val(a.nnz(), one);
  return CsrMatrix<U>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

template <typename T, typename U>
bool same_pattern(const CsrMatrix<T>& a, const CsrMatrix<U>& b) {
  return a.nrows() == b.nrows() && a.ncols() == b.ncols() &&
         std::ranges::equal(a.row_ptr(), b.row_ptr()) && std::ranges::equal(a.col_idx(), b.col_idx());
}

template <typename T>
bool is_pattern_symmetric(const CsrMatrix<T>& a) {
  if (a.nrows() != a.ncols()) return false;
  auto t = transpose(a);
  return same_pattern(a, t);
}

/// Simple undirected graph from any square pattern: symmetrized, self-loops
/// dropped, duplicate edges merged, every edge weight `one`.
template <typename U, typename T>
CsrMatrix<U> make_simple_graph(const CsrMatrix<T>& a, U one = U(1)) {
  if (a.nrows() != a.ncols()) throw DimensionError("a graph adjacency matrix must be square");
  std::vector<Triple<U>> edges;
  edges.reserve(2 * a.nnz());
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j : a.row_cols(i))
      if (i != j) {
        edges.push_back({i, j, one});
        edges.push_back({j, i, one});
      }
  return from_triples(a.nrows(), a.ncols(), edges, [](U x, U) { return x; });
}

/// Symmetric permutation P·A·Pᵀ where perm[old] = new.
template <typename T>
CsrMatrix<T> permute_symmetric(const CsrMatrix<T>& a, std::span<const Index> perm) {
  if (a.nrows() != a.ncols()) throw DimensionError("symmetric permutation requires a square matrix");
  if (perm.size() != a.nrows()) throw DimensionError("permutation length must equal the dimension");
  std::vector<Offset> ptr(Offset(a.nrows()) + 1, 0);
  for (Index i = 0; i < a.nrows(); ++i) ptr[perm[i] + 1] = a.row_nnz(i);
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<Index> idx(a.nnz());
  std::vector<T> val(a.nnz());
  for (Index i = 0; i < a.nrows(); ++i) {
    Offset dst = ptr[perm[i]];
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p, ++dst) {
      idx[dst] = perm[cols[p]];
      val[dst] = vals[p];
    }
  }
  return CsrMatrix<T>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

template <typename T>
struct Relabeled {
  CsrMatrix<T> matrix;
  /// perm[old] = new vertex id.
  std::vector<Index> perm;
};

/// Relabels vertices by non-increasing degree; ties keep ascending original index.
template <typename T>
Relabeled<T> degree_sort_relabel(const CsrMatrix<T>& a) {
  if (a.nrows() != a.ncols()) throw DimensionError("degree_sort_relabel requires a square matrix");
  std::vector<Index> order(a.nrows());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a.row_nnz(x) > a.row_nnz(y); });
  std::vector<Index> perm(a.nrows());
  for (Index k = 0; k < a.nrows(); ++k) perm[order[k]] = k;
  auto m = permute_symmetric(a, perm);
  return {std::move(m), std::move(perm)};
}

}  // namespace mspgemm
