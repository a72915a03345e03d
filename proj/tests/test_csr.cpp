#include <gtest/gtest.h>

#include <random>

#include "mspgemm/csr.hpp"
#include "oracle.hpp"

using namespace mspgemm;

namespace {

CsrMatrix<int> small() {
  // [1 0 2]
  // [0 0 0]
  // [3 4 0]
  return from_triples<int>(3, 3, std::vector<Triple<int>>{{2, 1, 4}, {0, 2, 2}, {0, 0, 1}, {2, 0, 3}});
}

}  // namespace

TEST(Csr, FromTriplesIsCanonical) {
  auto a = small();
  EXPECT_EQ(a.nnz(), 4u);
  EXPECT_EQ(std::vector<Offset>(a.row_ptr().begin(), a.row_ptr().end()), (std::vector<Offset>{0, 2, 2, 4}));
  EXPECT_EQ(std::vector<Index>(a.col_idx().begin(), a.col_idx().end()), (std::vector<Index>{0, 2, 0, 1}));
  EXPECT_EQ(std::vector<int>(a.values().begin(), a.values().end()), (std::vector<int>{1, 2, 3, 4}));
}

TEST(Csr, FromTriplesCombinesDuplicates) {
  std::vector<Triple<int>> t{{0, 1, 5}, {0, 1, 7}, {1, 0, 1}};
  auto sum = from_triples<int>(2, 2, t);
  EXPECT_EQ(sum.nnz(), 2u);
  EXPECT_EQ(sum.row_values(0)[0], 12);
  auto first = from_triples(2, 2, t, [](int x, int) { return x; });
  EXPECT_EQ(first.row_values(0)[0], 5);
}

TEST(Csr, FromTriplesRejectsOutOfRange) {
  std::vector<Triple<int>> t{{0, 3, 1}};
  EXPECT_THROW(from_triples<int>(2, 3, t), ConstructionError);
}

TEST(Csr, RawConstructorSortsRows) {
  CsrMatrix<int> a(2, 4, {0, 3, 4}, {3, 0, 2, 1}, {30, 0, 20, 10});
  EXPECT_EQ(std::vector<Index>(a.row_cols(0).begin(), a.row_cols(0).end()), (std::vector<Index>{0, 2, 3}));
  EXPECT_EQ(std::vector<int>(a.row_values(0).begin(), a.row_values(0).end()), (std::vector<int>{0, 20, 30}));
}

TEST(Csr, RawConstructorValidates) {
  EXPECT_THROW(CsrMatrix<int>(2, 2, {0, 1}, {0}, {1}), ConstructionError);
  EXPECT_THROW(CsrMatrix<int>(1, 2, {0, 2}, {1, 1}, {1, 2}), ConstructionError);
  EXPECT_THROW(CsrMatrix<int>(1, 2, {0, 1}, {2}, {1}), ConstructionError);
  EXPECT_THROW(CsrMatrix<int>(2, 2, {0, 2, 1}, {0, 1}, {1, 2}), ConstructionError);
  EXPECT_THROW(CsrMatrix<int>(1, 2, {0, 2}, {0, 1}, {1}), ConstructionError);
}

TEST(Csr, EmptyShapes) {
  CsrMatrix<int> z;
  EXPECT_EQ(z.nrows(), 0u);
  EXPECT_EQ(z.nnz(), 0u);
  CsrMatrix<int> e(5, 7);
  EXPECT_EQ(e.row_nnz(4), 0u);
}

TEST(Csr, TransposeRoundTrip) {
  std::mt19937_64 rng(3);
  auto a = oracle::random_matrix(17, 9, 4, rng);
  auto t = transpose(a);
  EXPECT_EQ(t.nrows(), 9u);
  EXPECT_EQ(t.ncols(), 17u);
  EXPECT_EQ(transpose(t), a);
  for (const auto& e : a.triples()) {
    auto cols = t.row_cols(e.col);
    auto it = std::lower_bound(cols.begin(), cols.end(), e.row);
    ASSERT_NE(it, cols.end());
    EXPECT_EQ(t.row_values(e.col)[std::size_t(it - cols.begin())], e.value);
  }
}

TEST(Csr, CscRoundTrip) {
  auto a = small();
  auto c = to_csc(a);
  EXPECT_EQ(c.nnz(), a.nnz());
  EXPECT_EQ(std::vector<Index>(c.col_rows(0).begin(), c.col_rows(0).end()), (std::vector<Index>{0, 2}));
  EXPECT_EQ(to_csr(c), a);
}

TEST(Csr, TrilAndDiagonal) {
  auto a = from_triples<int>(3, 3, std::vector<Triple<int>>{{0, 0, 1}, {1, 0, 2}, {0, 1, 3}, {2, 1, 4}, {2, 2, 5}});
  auto l = tril_strict(a);
  EXPECT_EQ(l.triples(), (std::vector<Triple<int>>{{1, 0, 2}, {2, 1, 4}}));
  auto d = diagonal(a);
  EXPECT_EQ(d.triples(), (std::vector<Triple<int>>{{0, 0, 1}, {2, 2, 5}}));
  EXPECT_THROW(tril_strict(CsrMatrix<int>(2, 3)), DimensionError);
}

TEST(Csr, MaskViewRowsAndComplement) {
  auto a = small();
  MaskView m(a);
  EXPECT_FALSE(m.complemented());
  EXPECT_EQ(m.nnz(), 4u);
  EXPECT_EQ(m.row(1).size(), 0u);
  auto c = m.complement();
  EXPECT_TRUE(c.complemented());
  EXPECT_FALSE(c.complement().complemented());
  EXPECT_EQ(c.row(2).size(), 2u);
}

TEST(Csr, SimpleGraphIsSymmetricWithoutLoops) {
  auto a = from_triples<int>(3, 3, std::vector<Triple<int>>{{0, 0, 1}, {0, 1, 1}, {2, 1, 1}});
  auto g = make_simple_graph<int>(a);
  EXPECT_TRUE(is_pattern_symmetric(g));
  EXPECT_EQ(g.nnz(), 4u);
  EXPECT_EQ(diagonal(g).nnz(), 0u);
  EXPECT_FALSE(is_pattern_symmetric(a));
}

TEST(Csr, DegreeRelabelPreservesStructure) {
  std::mt19937_64 rng(5);
  auto g = oracle::random_graph(40, 6, rng);
  auto r = degree_sort_relabel(g);
  EXPECT_EQ(r.matrix.nnz(), g.nnz());
  EXPECT_TRUE(is_pattern_symmetric(r.matrix));
  for (Index i = 0; i + 1 < r.matrix.nrows(); ++i) EXPECT_GE(r.matrix.row_nnz(i), r.matrix.row_nnz(i + 1));
  for (const auto& e : g.triples()) {
    auto cols = r.matrix.row_cols(r.perm[e.row]);
    EXPECT_TRUE(std::binary_search(cols.begin(), cols.end(), r.perm[e.col]));
  }
}

TEST(Csr, PatternHelpers) {
  auto a = small();
  auto p = pattern_cast<double>(a);
  EXPECT_TRUE(same_pattern(a, p));
  for (double v : p.values()) EXPECT_EQ(v, 1.0);
  auto s = select(a, [](Index, Index, int v) { return v % 2 == 0; });
  EXPECT_EQ(s.nnz(), 2u);
  EXPECT_FALSE(same_pattern(a, s));
}
