#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <omp.h>

#include "mspgemm/accumulators.hpp"
#include "mspgemm/csr.hpp"
#include "mspgemm/heap.hpp"
#include "mspgemm/semiring.hpp"
#include "mspgemm/spgevm.hpp"

namespace mspgemm {

enum class Algorithm { Msa, Hash, Mca, Heap, HeapDot, Inner };
enum class Phases { One, Two };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Msa,  Algorithm::Hash,    Algorithm::Mca,
                                               Algorithm::Heap, Algorithm::HeapDot, Algorithm::Inner};

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(Phases p) noexcept;
/// Accepts "msa", "hash", "mca", "heap", "heapdot", "inner" in any letter case.
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;
/// Accepts "1p" and "2p" in any letter case.
std::optional<Phases> parse_phases(std::string_view name) noexcept;

struct MultiplyPlan {
  Algorithm algorithm = Algorithm::Msa;
  Phases phases = Phases::One;
  /// Complements the mask view once more (a plain view becomes ¬M).
  bool complemented = false;
  /// 0 selects every available hardware thread.
  int workers = 1;
  /// Rows handed to a worker at a time.
  std::size_t grain = 64;
  /// Overrides the heap inspection depth (Heap: 1, HeapDot: kInspectAll).
  std::optional<std::size_t> heap_inspect;

  /// Throws PlanError for combinations no algorithm supports.
  void validate() const;
  std::size_t n_inspect() const noexcept;
  int resolved_workers() const noexcept;
  /// Scheme name in the usual notation, e.g. "MSA-1P", "HeapDot-2P".
  std::string name() const;
};

/// Counters and timings of one masked multiply.
struct MultiplyStats {
  /// flops(A·B): products the input sparsity generates, Σ_{A_ik≠0} nnz(B_{k*}).
  std::uint64_t flops = 0;
  /// Semiring multiplies actually evaluated (≤ flops).
  std::uint64_t evaluated = 0;
  /// Output slots allocated before compaction (one-phase bound or exact count).
  std::uint64_t allocated = 0;
  std::uint64_t output_nnz = 0;
  HashStats hash;
  double symbolic_seconds = 0.0;
  double numeric_seconds = 0.0;
  double total_seconds = 0.0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename T>
void check_dims(const MaskView& m, const CsrMatrix<T>& a, Index b_rows, Index b_cols) {
  if (a.ncols() != b_rows) throw DimensionError("inner dimensions of A and B differ");
  if (m.nrows() != a.nrows() || m.ncols() != b_cols) throw DimensionError("mask shape differs from A·B");
}

inline void merge_hash_stats(HashStats& into, const HashStats& s) {
  into.peak_load = std::max(into.peak_load, s.peak_load);
  into.max_probe = std::max(into.max_probe, s.max_probe);
  into.overflows += s.overflows;
}

/// Row kernel dispatch for the push algorithms. One instance per worker.
template <Semiring SR>
class PushWorker {
 public:
  using T = typename SR::value_type;

  PushWorker(const MultiplyPlan& plan, bool complemented, const CsrMatrix<T>& b)
      : algorithm_(plan.algorithm), complemented_(complemented), n_inspect_(plan.n_inspect()), b_(b), heap_(b.col_idx()) {
    switch (algorithm_) {
      case Algorithm::Msa: msa_.emplace(b.ncols(), complemented); break;
      case Algorithm::Hash: hash_.emplace(b.ncols(), complemented); break;
      case Algorithm::Mca: mca_.emplace(); break;
      default: break;
    }
  }

  template <bool kNumeric, typename Emit>
  void row(std::span<const Index> mask, std::span<const Index> u_cols, std::span<const T> u_vals, Offset flops,
           Emit&& emit) {
    auto count = [this] { ++evaluated_; };
    switch (algorithm_) {
      case Algorithm::Msa: msa_spgevm<SR, kNumeric>(*msa_, mask, u_cols, u_vals, b_, emit, count); break;
      case Algorithm::Hash: {
        std::size_t keys = mask.size();
        if (complemented_) keys = std::min<Offset>(mask.size() + flops, b_.ncols());
        hash_spgevm<SR, kNumeric>(*hash_, mask, keys, u_cols, u_vals, b_, emit, count);
        break;
      }
      case Algorithm::Mca: mca_spgevm<SR, kNumeric>(*mca_, mask, u_cols, u_vals, b_, emit, count); break;
      case Algorithm::Heap:
      case Algorithm::HeapDot:
        heap_spgevm<SR, kNumeric>(heap_, mask, complemented_, u_cols, u_vals, b_, n_inspect_, emit, count);
        break;
      case Algorithm::Inner: throw PlanError("inner product is not a push algorithm");
    }
  }

  std::uint64_t evaluated() const noexcept { return evaluated_; }
  HashStats hash_stats() const { return hash_ ? hash_->stats() : HashStats{}; }

 private:
  Algorithm algorithm_;
  bool complemented_;
  std::size_t n_inspect_;
  const CsrMatrix<T>& b_;
  std::optional<MsaAccumulator<SR>> msa_;
  std::optional<HashAccumulator<SR>> hash_;
  std::optional<McaAccumulator<SR>> mca_;
  CursorHeap heap_;
  std::uint64_t evaluated_ = 0;
};

/// Pull worker: one sparse dot per mask entry of the row.
template <Semiring SR>
class InnerWorker {
 public:
  using T = typename SR::value_type;

  explicit InnerWorker(const CscMatrix<T>& b) : b_(b) {}

  template <bool kNumeric, typename Emit>
  void row(std::span<const Index> mask, std::span<const Index> a_cols, std::span<const T> a_vals, Offset,
           Emit&& emit) {
    auto count = [this] { ++evaluated_; };
    if (a_cols.empty()) return;
    for (Index j : mask) {
      T v{};
      if (sparse_dot<SR, kNumeric>(a_cols, a_vals, b_.col_rows(j), b_.col_values(j), v, count)) emit(j, v);
    }
  }

  std::uint64_t evaluated() const noexcept { return evaluated_; }
  HashStats hash_stats() const { return {}; }

 private:
  const CscMatrix<T>& b_;
  std::uint64_t evaluated_ = 0;
};

/// Runs `body(worker, row)` for every row with dynamic scheduling. Each
/// thread builds its own worker via `make_worker()`; `finish(worker)` runs
/// once per thread under a critical section.
template <typename MakeWorker, typename Body, typename Finish>
void parallel_rows(Index nrows, int workers, std::size_t grain, MakeWorker&& make_worker, Body&& body,
                   Finish&& finish) {
  const std::int64_t n = nrows;
  const int chunk = static_cast<int>(std::max<std::size_t>(grain, 1));
  std::exception_ptr error;
#pragma omp parallel num_threads(workers)
  {
    try {
      auto worker = make_worker();
#pragma omp for schedule(dynamic, chunk)
      for (std::int64_t i = 0; i < n; ++i) {
        try {
          body(worker, static_cast<Index>(i));
        } catch (...) {
#pragma omp critical(mspgemm_error)
          if (!error) error = std::current_exception();
        }
      }
#pragma omp critical(mspgemm_finish)
      finish(worker);
    } catch (...) {
#pragma omp critical(mspgemm_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Per-row output bound for the one-phase algorithm.
inline Offset one_phase_bound(std::size_t mask_row_nnz, bool complemented, Offset row_flops, Index ncols) {
  return complemented ? std::min<Offset>(row_flops, ncols) : Offset(mask_row_nnz);
}

/// Row-parallel driver shared by push and pull algorithms. `b_row_nnz(k)`
/// gives nnz(B_{k*}) for the flop count.
template <Semiring SR, typename MakeWorker, typename BRowNnz>
CsrMatrix<typename SR::value_type> drive(const MaskView& m, bool complemented, const CsrMatrix<typename SR::value_type>& a,
                                         Index ncols, const MultiplyPlan& plan, MakeWorker&& make_worker,
                                         BRowNnz&& b_row_nnz, MultiplyStats* stats) {
  using T = typename SR::value_type;
  const auto t_start = Clock::now();
  const Index nrows = a.nrows();
  const int workers = plan.resolved_workers();

  MultiplyStats local;
  std::vector<Offset> flops(Offset(nrows) + 1, 0);
  std::uint64_t total_flops = 0;
#pragma omp parallel for num_threads(workers) schedule(static) reduction(+ : total_flops)
  for (std::int64_t i = 0; i < std::int64_t(nrows); ++i) {
    Offset f = 0;
    for (Index k : a.row_cols(Index(i))) f += b_row_nnz(k);
    flops[i + 1] = f;
    total_flops += f;
  }
  local.flops = total_flops;

  auto finish = [&](auto& w) {
    local.evaluated += w.evaluated();
    merge_hash_stats(local.hash, w.hash_stats());
  };

  // Row capacity of the output buffer, then prefix sums into offsets.
  std::vector<Offset> slot(Offset(nrows) + 1, 0);
  std::vector<Offset> counts(nrows, 0);

  if (plan.phases == Phases::Two) {
    const auto t_sym = Clock::now();
    parallel_rows(
        nrows, workers, plan.grain, make_worker,
        [&](auto& w, Index i) {
          Offset c = 0;
          w.template row<false>(m.row(i), a.row_cols(i), a.row_values(i), flops[i + 1], [&](Index, const T&) { ++c; });
          slot[i + 1] = c;
        },
        [](auto&) {});
    local.symbolic_seconds = seconds_since(t_sym);
  } else {
    for (Index i = 0; i < nrows; ++i)
      slot[i + 1] = one_phase_bound(m.row(i).size(), complemented, flops[i + 1], ncols);
  }
  std::partial_sum(slot.begin(), slot.end(), slot.begin());
  local.allocated = slot.back();

  const auto t_num = Clock::now();
  std::vector<Index> cols(slot.back());
  std::vector<T> vals(slot.back());
  parallel_rows(
      nrows, workers, plan.grain, make_worker,
      [&](auto& w, Index i) {
        Offset pos = slot[i];
        const Offset cap = slot[i + 1];
        w.template row<true>(m.row(i), a.row_cols(i), a.row_values(i), flops[i + 1], [&](Index j, const T& v) {
          MSPGEMM_CHECK(pos < cap, "output row exceeded its preallocated bound");
          cols[pos] = j;
          vals[pos] = v;
          ++pos;
        });
        counts[i] = pos - slot[i];
        if (plan.phases == Phases::Two)
          MSPGEMM_CHECK(pos == cap, "numeric phase produced a different row size than the symbolic phase");
      },
      finish);

  CsrMatrix<T> out;
  if (plan.phases == Phases::Two) {
    out = CsrMatrix<T>(nrows, ncols, std::move(slot), std::move(cols), std::move(vals));
  } else {
    // Compact the per-row regions into a contiguous CSR.
    std::vector<Offset> ptr(Offset(nrows) + 1, 0);
    for (Index i = 0; i < nrows; ++i) ptr[i + 1] = ptr[i] + counts[i];
    std::vector<Index> out_cols(ptr.back());
    std::vector<T> out_vals(ptr.back());
#pragma omp parallel for num_threads(workers) schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(nrows); ++i) {
      std::copy_n(cols.begin() + std::ptrdiff_t(slot[i]), counts[i], out_cols.begin() + std::ptrdiff_t(ptr[i]));
      std::copy_n(vals.begin() + std::ptrdiff_t(slot[i]), counts[i], out_vals.begin() + std::ptrdiff_t(ptr[i]));
    }
    out = CsrMatrix<T>(nrows, ncols, std::move(ptr), std::move(out_cols), std::move(out_vals));
  }
  local.numeric_seconds = seconds_since(t_num);
  local.output_nnz = out.nnz();
  local.total_seconds = seconds_since(t_start);
  if (stats) *stats = local;
  return out;
}

template <Semiring SR>
CsrMatrix<typename SR::value_type> inner_drive(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                               const CscMatrix<typename SR::value_type>& b, const MultiplyPlan& plan,
                                               MultiplyStats* stats) {
  std::vector<Offset> b_row_nnz(b.nrows(), 0);
  for (Index r : b.row_idx()) ++b_row_nnz[r];
  return drive<SR>(
      m, false, a, b.ncols(), plan, [&] { return InnerWorker<SR>(b); }, [&](Index k) { return b_row_nnz[k]; },
      stats);
}

}  // namespace detail

/// C = M ⊙ (A·B) (or ¬M ⊙ (A·B)) with B in row-major form. The Inner
/// algorithm converts B to CSC first; the conversion is not part of the
/// reported timings.
template <Semiring SR>
CsrMatrix<typename SR::value_type> masked_multiply(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                                   const CsrMatrix<typename SR::value_type>& b,
                                                   const MultiplyPlan& plan, MultiplyStats* stats = nullptr) {
  const bool complemented = m.complemented() != plan.complemented;
  MultiplyPlan effective = plan;
  effective.complemented = complemented;
  effective.validate();
  detail::check_dims(m, a, b.nrows(), b.ncols());

  if (plan.algorithm == Algorithm::Inner) {
    auto b_csc = to_csc(b);
    return detail::inner_drive<SR>(m, a, b_csc, effective, stats);
  }
  return detail::drive<SR>(
      m, complemented, a, b.ncols(), effective,
      [&] { return detail::PushWorker<SR>(effective, complemented, b); }, [&](Index k) { return b.row_nnz(k); },
      stats);
}

/// Pull-based multiply: one sparse dot product A_{i*}·B_{*j} per mask entry,
/// traversing the mask row by row so A_{i*} is reused across a row.
/// Complemented masks are rejected.
template <Semiring SR>
CsrMatrix<typename SR::value_type> inner_product_multiply(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                                          const CscMatrix<typename SR::value_type>& b,
                                                          const MultiplyPlan& plan, MultiplyStats* stats = nullptr) {
  MultiplyPlan effective = plan;
  effective.algorithm = Algorithm::Inner;
  effective.complemented = m.complemented() != plan.complemented;
  effective.validate();
  detail::check_dims(m, a, b.nrows(), b.ncols());
  return detail::inner_drive<SR>(m, a, b, effective, stats);
}

/// Masked multiply with B already in column-major form; only Inner accepts it.
template <Semiring SR>
CsrMatrix<typename SR::value_type> masked_multiply(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                                   const CscMatrix<typename SR::value_type>& b,
                                                   const MultiplyPlan& plan, MultiplyStats* stats = nullptr) {
  if (plan.algorithm != Algorithm::Inner) throw PlanError("a column-major B operand requires the inner algorithm");
  return inner_product_multiply<SR>(m, a, b, plan, stats);
}

/// Exact per-row output counts, computed by the plan's accumulator with all
/// value arithmetic elided.
template <Semiring SR>
std::vector<Offset> symbolic_phase(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                   const CsrMatrix<typename SR::value_type>& b, const MultiplyPlan& plan) {
  using T = typename SR::value_type;
  const bool complemented = m.complemented() != plan.complemented;
  MultiplyPlan effective = plan;
  effective.complemented = complemented;
  effective.validate();
  detail::check_dims(m, a, b.nrows(), b.ncols());

  std::vector<Offset> counts(a.nrows(), 0);
  auto body = [&](auto& w, Index i) {
    Offset c = 0;
    w.template row<false>(m.row(i), a.row_cols(i), a.row_values(i), row_flops(a.row_cols(i), b),
                          [&](Index, const T&) { ++c; });
    counts[i] = c;
  };
  if (plan.algorithm == Algorithm::Inner) {
    auto b_csc = to_csc(b);
    detail::parallel_rows(
        a.nrows(), effective.resolved_workers(), plan.grain, [&] { return detail::InnerWorker<SR>(b_csc); }, body,
        [](auto&) {});
  } else {
    detail::parallel_rows(
        a.nrows(), effective.resolved_workers(), plan.grain,
        [&] { return detail::PushWorker<SR>(effective, complemented, b); }, body, [](auto&) {});
  }
  return counts;
}

/// Symbolic pass, exact allocation, numeric pass written in place.
template <Semiring SR>
CsrMatrix<typename SR::value_type> two_phase_multiply(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                                      const CsrMatrix<typename SR::value_type>& b, MultiplyPlan plan,
                                                      MultiplyStats* stats = nullptr) {
  plan.phases = Phases::Two;
  return masked_multiply<SR>(m, a, b, plan, stats);
}

/// Generous per-row allocation (mask row size, or the union bound when
/// complemented), a single numeric pass, then compaction.
template <Semiring SR>
CsrMatrix<typename SR::value_type> one_phase_multiply(const MaskView& m, const CsrMatrix<typename SR::value_type>& a,
                                                      const CsrMatrix<typename SR::value_type>& b, MultiplyPlan plan,
                                                      MultiplyStats* stats = nullptr) {
  plan.phases = Phases::One;
  return masked_multiply<SR>(m, a, b, plan, stats);
}

}  // namespace mspgemm
