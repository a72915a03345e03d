#include <gtest/gtest.h>

#include <random>

#include "mspgemm/generator.hpp"
#include "mspgemm/graph_kernels.hpp"
#include "oracle.hpp"

using namespace mspgemm;

namespace {

using Mat = CsrMatrix<std::int64_t>;

Mat complete(Index n) {
  std::vector<Triple<std::int64_t>> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) t.push_back({i, j, 1});
  return from_triples(n, n, t);
}

Mat from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Triple<std::int64_t>> t;
  for (auto [i, j] : edges) {
    t.push_back({i, j, 1});
    t.push_back({j, i, 1});
  }
  return from_triples(n, n, t);
}

std::vector<MultiplyPlan> plain_plans() {
  std::vector<MultiplyPlan> out;
  for (auto a : kAllAlgorithms)
    for (auto p : {Phases::One, Phases::Two}) out.push_back(MultiplyPlan{a, p});
  return out;
}

std::vector<MultiplyPlan> bc_plans() {
  std::vector<MultiplyPlan> out;
  for (auto a : {Algorithm::Msa, Algorithm::Hash, Algorithm::Heap, Algorithm::HeapDot})
    for (auto p : {Phases::One, Phases::Two}) out.push_back(MultiplyPlan{a, p});
  return out;
}

Mat rmat_graph(int scale, double degree, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GraphKind::Rmat;
  s.scale = scale;
  s.avg_degree = degree;
  s.seed = seed;
  return make_simple_graph<std::int64_t>(generate<std::int64_t>(s));
}

}  // namespace

TEST(TriangleCount, Cliques) {
  for (const auto& plan : plain_plans()) {
    EXPECT_EQ(triangle_count(complete(3), plan).triangles, 1u) << plan.name();
    EXPECT_EQ(triangle_count(complete(4), plan).triangles, 4u) << plan.name();
    EXPECT_EQ(triangle_count(complete(5), plan).triangles, 10u) << plan.name();
  }
}

TEST(TriangleCount, TreeHasNone) {
  auto tree = from_edges(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
  for (const auto& plan : plain_plans()) EXPECT_EQ(triangle_count(tree, plan).triangles, 0u);
}

TEST(TriangleCount, MatchesEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = oracle::random_graph(80, 10, rng);
    auto want = oracle::triangles(g);
    for (const auto& plan : plain_plans()) EXPECT_EQ(triangle_count(g, plan).triangles, want) << plan.name();
  }
}

TEST(TriangleCount, RejectsBadInput) {
  auto directed = from_triples<std::int64_t>(2, 2, std::vector<Triple<std::int64_t>>{{0, 1, 1}});
  EXPECT_THROW(triangle_count(directed, MultiplyPlan{}), DimensionError);
  MultiplyPlan comp;
  comp.complemented = true;
  EXPECT_THROW(triangle_count(complete(3), comp), PlanError);
}

TEST(TriangleCount, ReportsOneMultiply) {
  auto r = triangle_count(complete(5), MultiplyPlan{});
  ASSERT_EQ(r.stats.multiplies.size(), 1u);
  EXPECT_GT(r.stats.flops(), 0u);
}

TEST(KTruss, CliqueCases) {
  for (const auto& plan : plain_plans()) {
    auto k5 = k_truss(complete(5), 5, plan);
    EXPECT_EQ(k5.graph.nnz(), 20u) << plan.name();
    auto k4 = k_truss(complete(4), 5, plan);
    EXPECT_EQ(k4.graph.nnz(), 0u) << plan.name();
  }
}

TEST(KTruss, ThreeTrussIsTriangleEdges) {
  // Triangle 0-1-2 with a pendant path 2-3-4.
  auto g = from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  auto r = k_truss(g, 3, MultiplyPlan{});
  EXPECT_EQ(r.graph, from_edges(5, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST(KTruss, MatchesSupportOracleAndIsFixedPoint) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto g = rmat_graph(7, 8, seed);
    for (int k : {3, 4, 5}) {
      auto want = oracle::k_truss(g, k);
      for (const auto& plan : plain_plans()) {
        auto r = k_truss(g, k, plan);
        ASSERT_EQ(r.graph, want) << plan.name() << " k=" << k << " seed=" << seed;
        EXPECT_EQ(k_truss(r.graph, k, plan).graph, r.graph);
        EXPECT_EQ(r.stats.multiplies.size(), std::size_t(r.iterations));
      }
    }
  }
}

TEST(KTruss, NestedInLowerOrder) {
  auto g = rmat_graph(8, 8, 3);
  auto k4 = k_truss(g, 4, MultiplyPlan{});
  auto k5 = k_truss(g, 5, MultiplyPlan{});
  for (const auto& e : k5.graph.triples()) {
    auto cols = k4.graph.row_cols(e.row);
    EXPECT_TRUE(std::binary_search(cols.begin(), cols.end(), e.col));
  }
}

TEST(KTruss, RejectsSmallK) { EXPECT_THROW(k_truss(complete(3), 2, MultiplyPlan{}), std::invalid_argument); }

TEST(Bc, PathGraph) {
  auto g = from_edges(3, {{0, 1}, {1, 2}});
  for (const auto& plan : bc_plans()) {
    auto r = betweenness_centrality(g, BcConfig{}, plan);
    EXPECT_EQ(r.scores[0], 0.0);
    EXPECT_EQ(r.scores[2], 0.0);
    // Ordered pairs (0,2) and (2,0) both pass through 1.
    EXPECT_EQ(r.scores[1], 2.0);
  }
}

TEST(Bc, Star) {
  auto g = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto r = betweenness_centrality(g, BcConfig{2, {}}, MultiplyPlan{});
  EXPECT_EQ(r.batches, 3u);
  EXPECT_EQ(r.scores[0], 12.0);
  for (Index v = 1; v < 5; ++v) EXPECT_EQ(r.scores[v], 0.0);
}

TEST(Bc, MatchesBrandesOnRandomGraphs) {
  auto g = rmat_graph(7, 8, 5);
  auto sources = random_sources(g.nrows(), 40, 9);
  auto want = oracle::brandes(g, sources);
  for (const auto& plan : bc_plans()) {
    auto r = betweenness_centrality(g, BcConfig{16, sources}, plan);
    for (Index v = 0; v < g.nrows(); ++v) {
      EXPECT_NEAR(r.scores[v], want[v], 1e-6 * std::max(1.0, std::abs(want[v]))) << plan.name() << " v=" << v;
      EXPECT_GE(r.scores[v], 0.0);
    }
  }
}

TEST(Bc, BatchSizeDoesNotChangeScores) {
  std::mt19937_64 rng(3);
  auto g = oracle::random_graph(60, 5, rng);
  auto one = betweenness_centrality(g, BcConfig{1, {}}, MultiplyPlan{});
  auto all = betweenness_centrality(g, BcConfig{60, {}}, MultiplyPlan{});
  for (Index v = 0; v < 60; ++v) EXPECT_NEAR(one.scores[v], all.scores[v], 1e-9 * std::max(1.0, all.scores[v]));
}

TEST(Bc, RejectsPlansWithoutComplement) {
  auto g = complete(4);
  for (auto a : {Algorithm::Mca, Algorithm::Inner})
    EXPECT_THROW(betweenness_centrality(g, BcConfig{}, MultiplyPlan{a}), PlanError);
  EXPECT_THROW(betweenness_centrality(g, BcConfig{4, {0, 0}}, MultiplyPlan{}), std::invalid_argument);
  EXPECT_THROW(betweenness_centrality(g, BcConfig{4, {9}}, MultiplyPlan{}), std::invalid_argument);
}

TEST(RandomSources, DistinctAndDeterministic) {
  auto a = random_sources(100, 30, 4);
  auto b = random_sources(100, 30, 4);
  EXPECT_EQ(a, b);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  EXPECT_THROW(random_sources(10, 50, 1), std::invalid_argument);
}
