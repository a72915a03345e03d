#include <gtest/gtest.h>

#include <map>
#include <random>

#include "mspgemm/spgevm.hpp"
#include "oracle.hpp"

using namespace mspgemm;

namespace {

using SR = Arithmetic<std::int64_t>;
using Row = std::map<Index, std::int64_t>;

// m = {0, 2}, u = {(0,1), (1,2)}, B0 = {(0,1), (2,3)}, B1 = {(1,4), (2,5)}.
struct Worked {
  std::vector<Index> mask{0, 2};
  std::vector<Index> u_cols{0, 1};
  std::vector<std::int64_t> u_vals{1, 2};
  CsrMatrix<std::int64_t> b =
      from_triples<std::int64_t>(2, 3, std::vector<Triple<std::int64_t>>{{0, 0, 1}, {0, 2, 3}, {1, 1, 4}, {1, 2, 5}});
};

struct Collect {
  Row row;
  std::vector<Index> order;
  void operator()(Index j, std::int64_t v) {
    row[j] = v;
    order.push_back(j);
  }
};

bool ascending(const std::vector<Index>& v) { return std::is_sorted(v.begin(), v.end()); }

}  // namespace

TEST(Msa, WorkedExample) {
  Worked w;
  MsaAccumulator<SR> acc(3, false);
  Collect out;
  int evaluated = 0;
  msa_spgevm<SR>(acc, w.mask, w.u_cols, w.u_vals, w.b, std::ref(out), [&] { ++evaluated; });
  EXPECT_EQ(out.row, (Row{{0, 1}, {2, 13}}));
  EXPECT_EQ(evaluated, 3);
  for (auto s : acc.states()) EXPECT_EQ(s, SlotState::NotAllowed);
}

TEST(Msa, ComplementedWorkedExample) {
  Worked w;
  MsaAccumulator<SR> acc(3, true);
  Collect out;
  int evaluated = 0;
  msa_spgevm<SR>(acc, w.mask, w.u_cols, w.u_vals, w.b, std::ref(out), [&] { ++evaluated; });
  EXPECT_EQ(out.row, (Row{{1, 8}}));
  EXPECT_EQ(evaluated, 1);
  for (auto s : acc.states()) EXPECT_EQ(s, SlotState::Allowed);
  EXPECT_TRUE(acc.inserted_keys().empty());
}

TEST(Msa, StateTransitions) {
  MsaAccumulator<SR> acc(4, false);
  acc.set_allowed(1);
  int calls = 0;
  acc.insert(0, [&] { return ++calls, std::int64_t(9); });
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(acc.state(0), SlotState::NotAllowed);
  acc.insert(1, [&] { return ++calls, std::int64_t(2); });
  acc.insert(1, [&] { return ++calls, std::int64_t(3); });
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(acc.state(1), SlotState::Set);
  EXPECT_EQ(acc.remove(1), std::optional<std::int64_t>(5));
  EXPECT_EQ(acc.state(1), SlotState::NotAllowed);
  EXPECT_EQ(acc.remove(0), std::nullopt);
}

TEST(Hash, WorkedExample) {
  Worked w;
  HashAccumulator<SR> acc(3, false);
  Collect out;
  int evaluated = 0;
  hash_spgevm<SR>(acc, w.mask, w.mask.size(), w.u_cols, w.u_vals, w.b, std::ref(out), [&] { ++evaluated; });
  EXPECT_EQ(out.row, (Row{{0, 1}, {2, 13}}));
  EXPECT_EQ(evaluated, 3);
  EXPECT_EQ(acc.capacity(), 8u);
  EXPECT_LE(acc.stats().peak_load, 0.25);
}

TEST(Hash, ComplementedWorkedExample) {
  Worked w;
  HashAccumulator<SR> acc(3, true);
  Collect out;
  hash_spgevm<SR>(acc, w.mask, 3, w.u_cols, w.u_vals, w.b, std::ref(out), [] {});
  EXPECT_EQ(out.row, (Row{{1, 8}}));
}

TEST(Hash, CapacityIsPowerOfTwoAtLeastFourTimesKeys) {
  EXPECT_EQ(HashAccumulator<SR>::capacity_for(0), 4u);
  EXPECT_EQ(HashAccumulator<SR>::capacity_for(1), 4u);
  EXPECT_EQ(HashAccumulator<SR>::capacity_for(2), 8u);
  EXPECT_EQ(HashAccumulator<SR>::capacity_for(3), 16u);
  EXPECT_EQ(HashAccumulator<SR>::capacity_for(100), 512u);
}

TEST(Hash, CollidingKeysAndTombstones) {
  HashAccumulator<SR> acc(1000, false);
  acc.begin_row(8);
  std::vector<Index> keys{0, 32, 64, 96, 128, 160, 192, 224};
  for (Index k : keys) acc.set_allowed(k);
  EXPECT_EQ(acc.occupied(), keys.size());
  for (Index k : keys) acc.insert(k, [k] { return std::int64_t(k); });
  // Removing an early key must not break the chain to later ones.
  EXPECT_EQ(acc.remove(0), std::optional<std::int64_t>(0));
  for (Index k : keys)
    if (k != 0) {
      EXPECT_EQ(acc.remove(k), std::optional<std::int64_t>(k));
    }
  acc.insert(5, [] { return std::int64_t(1); });
  EXPECT_EQ(acc.state(5), SlotState::NotAllowed);
  acc.end_row();
  EXPECT_LE(acc.stats().peak_load, 0.25);
}

TEST(Hash, ScratchIsCleanBetweenRows) {
  HashAccumulator<SR> acc(10, false);
  acc.begin_row(2);
  acc.set_allowed(3);
  acc.insert(3, [] { return std::int64_t(7); });
  acc.begin_row(2);
  EXPECT_EQ(acc.state(3), SlotState::NotAllowed);
  EXPECT_EQ(acc.occupied(), 0u);
}

TEST(Hash, OverfullRowIsAnInternalError) {
  HashAccumulator<SR> acc(100, true);
  acc.begin_row(0);
  acc.mark(1);
  acc.mark(2);
  acc.mark(3);
  EXPECT_THROW(acc.mark(4), InternalError);
  EXPECT_EQ(acc.stats().overflows, 1u);
}

TEST(Mca, WorkedExample) {
  Worked w;
  McaAccumulator<SR> acc;
  Collect out;
  int evaluated = 0;
  mca_spgevm<SR>(acc, w.mask, w.u_cols, w.u_vals, w.b, std::ref(out), [&] { ++evaluated; });
  EXPECT_EQ(out.row, (Row{{0, 1}, {2, 13}}));
  EXPECT_EQ(evaluated, 3);
  EXPECT_EQ(acc.state(0), SlotState::Allowed);
  EXPECT_EQ(acc.state(1), SlotState::Allowed);
}

TEST(Mca, RankAddressing) {
  McaAccumulator<SR> acc;
  acc.begin_row(3);
  acc.insert(2, [] { return std::int64_t(4); });
  acc.insert(2, [] { return std::int64_t(6); });
  EXPECT_EQ(acc.remove(2), std::optional<std::int64_t>(10));
  EXPECT_EQ(acc.remove(0), std::nullopt);
}

TEST(Symbolic, MarkProducesNumericPattern) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    auto b = oracle::random_matrix(30, 40, 5, rng);
    auto u = oracle::random_matrix(1, 30, 6, rng);
    auto m = oracle::random_matrix(1, 40, 12, rng);
    for (bool comp : {false, true}) {
      MsaAccumulator<SR> num(40, comp), sym(40, comp);
      Collect a, s;
      msa_spgevm<SR>(num, m.row_cols(0), u.row_cols(0), u.row_values(0), b, std::ref(a), [] {});
      int evaluated = 0;
      msa_spgevm<SR, false>(sym, m.row_cols(0), u.row_cols(0), u.row_values(0), b, std::ref(s), [&] { ++evaluated; });
      EXPECT_EQ(a.order, s.order);
      EXPECT_TRUE(ascending(a.order));
      EXPECT_EQ(evaluated, 0);
    }
  }
}

TEST(Kernels, AllAgreeOnRandomRows) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 64;
    auto b = oracle::random_matrix(n, n, 6, rng);
    auto u = oracle::random_matrix(1, n, 5, rng);
    auto m = oracle::random_matrix(1, n, 10, rng);
    auto expect = oracle::masked_product(m, false, u, b);
    Row want;
    for (const auto& t : expect.triples()) want[t.col] = t.value;

    MsaAccumulator<SR> msa(n, false);
    HashAccumulator<SR> hash(n, false);
    McaAccumulator<SR> mca;
    Collect a, h, c;
    msa_spgevm<SR>(msa, m.row_cols(0), u.row_cols(0), u.row_values(0), b, std::ref(a), [] {});
    hash_spgevm<SR>(hash, m.row_cols(0), m.nnz(), u.row_cols(0), u.row_values(0), b, std::ref(h), [] {});
    mca_spgevm<SR>(mca, m.row_cols(0), u.row_cols(0), u.row_values(0), b, std::ref(c), [] {});
    EXPECT_EQ(a.row, want);
    EXPECT_EQ(h.row, want);
    EXPECT_EQ(c.row, want);
    EXPECT_TRUE(ascending(a.order) && ascending(h.order) && ascending(c.order));

    auto cexpect = oracle::masked_product(m, true, u, b);
    Row cwant;
    for (const auto& t : cexpect.triples()) cwant[t.col] = t.value;
    MsaAccumulator<SR> cmsa(n, true);
    HashAccumulator<SR> chash(n, true);
    Collect ca, ch;
    const std::size_t keys = std::min<std::size_t>(m.nnz() + row_flops(u.row_cols(0), b), n);
    msa_spgevm<SR>(cmsa, m.row_cols(0), u.row_cols(0), u.row_values(0), b, std::ref(ca), [] {});
    hash_spgevm<SR>(chash, m.row_cols(0), keys, u.row_cols(0), u.row_values(0), b, std::ref(ch), [] {});
    EXPECT_EQ(ca.row, cwant);
    EXPECT_EQ(ch.row, cwant);
    EXPECT_TRUE(ascending(ca.order) && ascending(ch.order));
  }
}

TEST(SparseDot, MergesSortedLists) {
  std::vector<Index> a{1, 3, 5, 7}, b{0, 3, 7, 9};
  std::vector<std::int64_t> av{1, 2, 3, 4}, bv{10, 20, 30, 40};
  std::int64_t out = 0;
  int mults = 0;
  EXPECT_TRUE(sparse_dot<SR>(a, av, b, bv, out, [&] { ++mults; }));
  EXPECT_EQ(out, 2 * 20 + 4 * 30);
  EXPECT_EQ(mults, 2);
  std::vector<Index> c{2, 4};
  std::vector<std::int64_t> cv{1, 1};
  EXPECT_FALSE(sparse_dot<SR>(a, av, c, cv, out, [] {}));
}

TEST(Semiring, PlusPairCountsProducts) {
  using PP = PlusPair<std::int64_t>;
  EXPECT_EQ(PP::multiply(7, -3), 1);
  EXPECT_EQ(PP::add(2, 5), 7);
  EXPECT_EQ(PP::zero(), 0);
  EXPECT_EQ(SR::multiply(7, -3), -21);
  EXPECT_EQ(SR::add(SR::zero(), 4), 4);
}
