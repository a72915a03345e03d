#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "mspgemm/csr.hpp"
#include "mspgemm/multiply.hpp"
#include "mspgemm/semiring.hpp"

namespace mspgemm {

/// Per-multiply counters collected by a kernel run.
struct KernelStats {
  std::vector<MultiplyStats> multiplies;

  std::uint64_t flops() const noexcept {
    std::uint64_t f = 0;
    for (const auto& m : multiplies) f += m.flops;
    return f;
  }
  /// Sum of masked-multiply wall times; excludes all kernel bookkeeping.
  double multiply_seconds() const noexcept {
    double s = 0;
    for (const auto& m : multiplies) s += m.total_seconds;
    return s;
  }
};

struct TriangleCountResult {
  std::uint64_t triangles = 0;
  KernelStats stats;
};

struct KTrussResult {
  /// Surviving symmetric subgraph, every value 1.
  CsrMatrix<std::int64_t> graph;
  int iterations = 0;
  KernelStats stats;
};

struct BcConfig {
  std::size_t batch_size = 512;
  /// Empty means every vertex is a source.
  std::vector<Index> sources;
};

struct BcResult {
  std::vector<double> scores;
  std::size_t batches = 0;
  KernelStats stats;
};

/// `count` distinct vertices of [0, n) drawn with a fixed seed.
std::vector<Index> random_sources(Index n, std::size_t count, std::uint64_t seed);

namespace detail {

inline void require_undirected(bool symmetric) {
  if (!symmetric) throw DimensionError("graph kernels require a square, pattern-symmetric adjacency matrix");
}

/// Union of two CSR matrices with disjoint patterns.
template <typename T>
CsrMatrix<T> merge_disjoint(const CsrMatrix<T>& a, const CsrMatrix<T>& b) {
  std::vector<Offset> ptr(Offset(a.nrows()) + 1, 0);
  std::vector<Index> idx;
  std::vector<T> val;
  idx.reserve(a.nnz() + b.nnz());
  val.reserve(a.nnz() + b.nnz());
  for (Index i = 0; i < a.nrows(); ++i) {
    auto ac = a.row_cols(i), bc = b.row_cols(i);
    auto av = a.row_values(i), bv = b.row_values(i);
    std::size_t p = 0, q = 0;
    while (p < ac.size() || q < bc.size()) {
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        idx.push_back(ac[p]);
        val.push_back(av[p++]);
      } else {
        idx.push_back(bc[q]);
        val.push_back(bv[q++]);
      }
    }
    ptr[i + 1] = idx.size();
  }
  return CsrMatrix<T>(a.nrows(), a.ncols(), std::move(ptr), std::move(idx), std::move(val));
}

}  // namespace detail

/// Triangles of a simple undirected graph: relabel by non-increasing degree,
/// take L = strictly lower triangle, and reduce L ⊙ (L·L) under the
/// plus-pair semiring.
template <typename T>
TriangleCountResult triangle_count(const CsrMatrix<T>& g, const MultiplyPlan& plan) {
  detail::require_undirected(is_pattern_symmetric(g));
  if (plan.complemented) throw PlanError("triangle counting uses a plain mask");
  using SR = PlusPair<std::int64_t>;
  auto relabeled = degree_sort_relabel(pattern_cast<std::int64_t>(g));
  auto lower = tril_strict(relabeled.matrix);

  TriangleCountResult result;
  MultiplyStats st;
  auto product = masked_multiply<SR>(MaskView(lower), lower, lower, plan, &st);
  result.stats.multiplies.push_back(st);
  for (auto v : product.values()) result.triangles += static_cast<std::uint64_t>(v);
  return result;
}

/// k-truss by repeated support counting: S = G ⊙ (G·G) with plus-pair, drop
/// every edge with support < k-2, until nothing changes.
template <typename T>
KTrussResult k_truss(const CsrMatrix<T>& g, int k, const MultiplyPlan& plan) {
  detail::require_undirected(is_pattern_symmetric(g));
  if (k < 3) throw std::invalid_argument("k-truss needs k >= 3");
  if (plan.complemented) throw PlanError("k-truss uses a plain mask");
  using SR = PlusPair<std::int64_t>;
  const std::int64_t need = k - 2;

  KTrussResult result;
  auto current = select(pattern_cast<std::int64_t>(g), [](Index i, Index j, std::int64_t) { return i != j; });
  for (;;) {
    ++result.iterations;
    MultiplyStats st;
    auto support = masked_multiply<SR>(MaskView(current), current, current, plan, &st);
    result.stats.multiplies.push_back(st);

    // support's pattern is a subset of current's; walk both rows together.
    std::vector<Offset> ptr(Offset(current.nrows()) + 1, 0);
    std::vector<Index> idx;
    for (Index i = 0; i < current.nrows(); ++i) {
      auto sc = support.row_cols(i);
      auto sv = support.row_values(i);
      for (std::size_t q = 0; q < sc.size(); ++q)
        if (sv[q] >= need) idx.push_back(sc[q]);
      ptr[i + 1] = idx.size();
    }
    if (idx.size() == current.nnz()) break;
    std::vector<std::int64_t> ones(idx.size(), 1);
    current = CsrMatrix<std::int64_t>(current.nrows(), current.ncols(), std::move(ptr), std::move(idx),
                                      std::move(ones));
    if (current.nnz() == 0) break;
  }
  result.graph = std::move(current);
  return result;
}

/// Batched Brandes betweenness centrality on an unweighted graph.
///
/// Each batch keeps a (batch × n) frontier whose row r belongs to source r.
/// Forward: F ← ¬visited ⊙ (F·A) records path counts per BFS level.
/// Backward: for each level d from the deepest down to 2,
///   W = (1 + δ_d) / σ_d on level d's pattern,
///   δ_{d-1} += σ_{d-1} · (level_{d-1} ⊙ (W·Aᵀ)).
/// Scores sum δ over all sources, excluding each source itself, over
/// ordered pairs (no halving for undirected graphs).
template <typename T>
BcResult betweenness_centrality(const CsrMatrix<T>& g, const BcConfig& cfg, const MultiplyPlan& plan) {
  if (g.nrows() != g.ncols()) throw DimensionError("betweenness centrality needs a square adjacency matrix");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
  {
    MultiplyPlan probe = plan;
    probe.complemented = true;
    probe.validate();
  }
  using SR = Arithmetic<double>;
  const Index n = g.nrows();

  std::vector<Index> sources = cfg.sources;
  if (sources.empty()) {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), Index{0});
  }
  {
    std::unordered_set<Index> seen;
    for (Index s : sources) {
      if (s >= n) throw std::invalid_argument("source vertex out of range");
      if (!seen.insert(s).second) throw std::invalid_argument("sources must be distinct");
    }
  }

  auto adj = pattern_cast<double>(g);
  auto adj_t = transpose(adj);
  MultiplyPlan fwd = plan;
  fwd.complemented = false;

  BcResult result;
  result.scores.assign(n, 0.0);
  for (std::size_t first = 0; first < sources.size(); first += cfg.batch_size) {
    const std::size_t b = std::min(cfg.batch_size, sources.size() - first);
    ++result.batches;

    std::vector<Offset> ptr(b + 1);
    std::iota(ptr.begin(), ptr.end(), Offset{0});
    std::vector<Index> idx(sources.begin() + std::ptrdiff_t(first), sources.begin() + std::ptrdiff_t(first + b));
    std::vector<double> ones(b, 1.0);
    std::vector<CsrMatrix<double>> levels;
    levels.emplace_back(Index(b), n, std::move(ptr), std::move(idx), std::move(ones));
    CsrMatrix<double> visited = levels.front();

    for (;;) {
      MultiplyStats st;
      auto next = masked_multiply<SR>(MaskView(visited, true), levels.back(), adj, fwd, &st);
      result.stats.multiplies.push_back(st);
      if (next.nnz() == 0) break;
      visited = detail::merge_disjoint(visited, next);
      levels.push_back(std::move(next));
    }

    std::vector<std::vector<double>> delta(levels.size());
    for (std::size_t d = 0; d < levels.size(); ++d) delta[d].assign(levels[d].nnz(), 0.0);

    for (std::size_t d = levels.size() - 1; d >= 2; --d) {
      const auto& lvl = levels[d];
      std::vector<double> w(lvl.nnz());
      auto sigma = lvl.values();
      for (Offset p = 0; p < lvl.nnz(); ++p) w[p] = (1.0 + delta[d][p]) / sigma[p];
      CsrMatrix<double> weights(lvl.nrows(), lvl.ncols(), std::vector<Offset>(lvl.row_ptr().begin(), lvl.row_ptr().end()),
                                std::vector<Index>(lvl.col_idx().begin(), lvl.col_idx().end()), std::move(w));

      const auto& prev = levels[d - 1];
      MultiplyStats st;
      auto z = masked_multiply<SR>(MaskView(prev), weights, adj_t, fwd, &st);
      result.stats.multiplies.push_back(st);

      auto prev_sigma = prev.values();
      for (Index r = 0; r < prev.nrows(); ++r) {
        auto pc = prev.row_cols(r);
        auto zc = z.row_cols(r);
        auto zv = z.row_values(r);
        std::size_t p = 0;
        for (std::size_t q = 0; q < zc.size(); ++q) {
          while (pc[p] < zc[q]) ++p;
          Offset at = prev.row_begin(r) + p;
          delta[d - 1][at] += zv[q] * prev_sigma[at];
        }
      }
    }

    for (std::size_t d = 1; d < levels.size(); ++d) {
      auto cols = levels[d].col_idx();
      for (Offset p = 0; p < levels[d].nnz(); ++p) result.scores[cols[p]] += delta[d][p];
    }
  }
  return result;
}

}  // namespace mspgemm
