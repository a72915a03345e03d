#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "mspgemm/bench.hpp"
#include "mspgemm/matrix_market.hpp"

using namespace mspgemm;
using namespace mspgemm::bench;

namespace {

ExperimentRecord rec(const std::string& input, const std::string& algo, double seconds) {
  ExperimentRecord r;
  r.benchmark = "tricount";
  r.algorithm = algo;
  r.phases = "1P";
  r.input = input;
  r.seconds = seconds;
  return r;
}

InputSpec k4_input(const std::filesystem::path& dir) {
  auto path = dir / "k4.mtx";
  write_text_file(path,
                  "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 6\n2 1\n3 1\n4 1\n3 2\n4 2\n4 3\n");
  InputSpec in;
  in.file = path;
  return in;
}

std::vector<MultiplyPlan> every_plan() {
  std::vector<MultiplyPlan> out;
  for (auto a : kAllAlgorithms) out.push_back(MultiplyPlan{a, Phases::One});
  return out;
}

}  // namespace

TEST(Traffic, WorkedExamples) {
  EXPECT_EQ(traffic_estimate(TrafficKind::Pull, {100, 200, 50, 20, 8, 0}), 650.0);
  EXPECT_EQ(traffic_estimate(TrafficKind::Pull, {100, 200, 0, 20, 8, 0}), 100.0);
  EXPECT_EQ(traffic_estimate(TrafficKind::Push, {100, 0, 0, 1, 8, 1000}), 1900.0);
}

TEST(Metrics, Definitions) {
  EXPECT_DOUBLE_EQ(gflops(2'000'000'000, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(mteps(3'000'000, 1.5), 2.0);
  EXPECT_EQ(gflops(10, 0.0), 0.0);
}

TEST(Csv, RowRoundTrip) {
  ExperimentRecord r = rec("rmat-s8-d16-seed42", "Hash", 0.125);
  r.phases = "2P";
  r.complemented = true;
  r.scale = 8;
  r.degree = 16;
  r.mask_degree = 4;
  r.threads = 4;
  r.trial = 3;
  r.flops = 123456789;
  r.metric = gflops(r.flops, r.seconds);
  auto back = parse_csv_row(to_csv_row(r), 2);
  EXPECT_EQ(to_csv_row(back), to_csv_row(r));
  EXPECT_EQ(back.key(), r.key());
  EXPECT_NEAR(gflops(back.flops, back.seconds), back.metric, 1e-6 * back.metric);
}

TEST(Csv, HeaderAndMalformedRows) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_csv(bad_header), ParseError);
  std::istringstream short_row(std::string(kCsvHeader) + "\ntricount,MSA,1P\n");
  try {
    read_csv(short_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_TRUE(read_csv(std::filesystem::path("/nonexistent/x.csv")).empty());
}

TEST(Csv, AppendWritesHeaderOnce) {
  auto path = std::filesystem::temp_directory_path() / "mspgemm_append_test.csv";
  std::filesystem::remove(path);
  append_csv(path, {rec("x", "MSA", 1.0)});
  auto skipped = rec("x", "Inner", 1.0);
  skipped.skipped = "excluded";
  append_csv(path, {rec("y", "MSA", 2.0), skipped});
  auto rows = read_csv(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].input, "y");
  std::filesystem::remove(path);
}

TEST(Profile, SingleScheme) {
  auto p = performance_profile({rec("a", "MSA", 1.0), rec("b", "MSA", 3.0)});
  EXPECT_EQ(p.fraction_within("MSA-1P", 1.0), 1.0);
  EXPECT_EQ(p.curve("MSA-1P"), (std::vector<std::pair<double, double>>{{1.0, 1.0}}));
}

TEST(Profile, IdenticalTimes) {
  auto p = performance_profile({rec("a", "MSA", 1.0), rec("a", "Hash", 1.0), rec("b", "MSA", 2.0), rec("b", "Hash", 2.0)});
  EXPECT_EQ(p.fraction_within("MSA-1P", 1.0), 1.0);
  EXPECT_EQ(p.fraction_within("Hash-1P", 1.0), 1.0);
}

TEST(Profile, HandComputedThreeInputs) {
  // Input a: MSA 1, Hash 2, Heap 4.   Ratios MSA 1,   Hash 2,   Heap 4.
  // Input b: MSA 3, Hash 1, Heap 1.5. Ratios MSA 3,   Hash 1,   Heap 1.5.
  // Input c: MSA 2, Hash 2, Heap missing. Ratios MSA 1, Hash 1, Heap inf.
  auto p = performance_profile({rec("a", "MSA", 1), rec("a", "Hash", 2), rec("a", "Heap", 4), rec("b", "MSA", 3),
                                rec("b", "Hash", 1), rec("b", "Heap", 1.5), rec("c", "MSA", 2), rec("c", "Hash", 2)});
  EXPECT_EQ(p.inputs.size(), 3u);
  EXPECT_EQ(p.ratios["MSA-1P"], (std::vector<double>{1, 1, 3}));
  EXPECT_EQ(p.ratios["Hash-1P"], (std::vector<double>{1, 1, 2}));
  EXPECT_TRUE(std::isinf(p.ratios["Heap-1P"].back()));
  EXPECT_DOUBLE_EQ(p.fraction_within("MSA-1P", 1.0), 2.0 / 3);
  EXPECT_DOUBLE_EQ(p.fraction_within("MSA-1P", 2.9), 2.0 / 3);
  EXPECT_DOUBLE_EQ(p.fraction_within("MSA-1P", 3.0), 1.0);
  EXPECT_DOUBLE_EQ(p.fraction_within("Hash-1P", 1.5), 2.0 / 3);
  EXPECT_DOUBLE_EQ(p.fraction_within("Heap-1P", 1.5), 1.0 / 3);
  EXPECT_DOUBLE_EQ(p.fraction_within("Heap-1P", 1e9), 2.0 / 3);
  auto heap = p.curve("Heap-1P");
  EXPECT_EQ(heap, (std::vector<std::pair<double, double>>{{1.5, 1.0 / 3}, {4.0, 2.0 / 3}}));
  for (const auto& [s, r] : p.ratios) EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
}

TEST(Profile, TableHasOneRowPerScheme) {
  auto p = performance_profile({rec("a", "MSA", 1), rec("a", "Hash", 2)});
  std::ostringstream os;
  write_profile_table(os, p, {1.0, 2.0});
  EXPECT_EQ(os.str(), "scheme,y(1),y(2)\nHash-1P,0.0000,1.0000\nMSA-1P,1.0000,1.0000\n");
}

TEST(Experiment, TriangleCountOnK4UnderAllPlans) {
  ExperimentConfig cfg;
  cfg.benchmark = Benchmark::TriangleCount;
  cfg.plans = every_plan();
  cfg.inputs = {k4_input(std::filesystem::temp_directory_path())};
  cfg.trials = 2;
  auto recs = run_experiment(cfg);
  ASSERT_EQ(recs.size(), 6u);
  for (const auto& r : recs) {
    EXPECT_TRUE(r.skipped.empty());
    EXPECT_EQ(r.answer, 4.0);
    EXPECT_EQ(r.benchmark, "tricount");
    EXPECT_NEAR(r.metric, gflops(r.flops, r.seconds), 1e-9);
  }
}

TEST(Experiment, BcSkipsUnsupportedPlans) {
  ExperimentConfig cfg;
  cfg.benchmark = Benchmark::Bc;
  cfg.plans = every_plan();
  cfg.inputs = {k4_input(std::filesystem::temp_directory_path())};
  cfg.trials = 1;
  cfg.batch = 4;
  auto recs = run_experiment(cfg);
  ASSERT_EQ(recs.size(), 6u);
  for (const auto& r : recs) {
    bool excluded = r.algorithm == "Inner" || r.algorithm == "MCA";
    EXPECT_EQ(!r.skipped.empty(), excluded) << r.algorithm;
    if (!excluded) {
      EXPECT_EQ(r.traversed_edges, 4u * 12u);
      EXPECT_NEAR(r.metric, mteps(r.traversed_edges, r.seconds), 1e-9);
    }
  }
}

TEST(Experiment, DeterministicFlopsAndResume) {
  ExperimentConfig cfg;
  cfg.benchmark = Benchmark::Multiply;
  cfg.plans = {MultiplyPlan{Algorithm::Hash, Phases::Two}};
  GeneratorSpec g;
  g.kind = GraphKind::Rmat;
  g.scale = 8;
  g.avg_degree = 6;
  g.seed = 11;
  InputSpec in;
  in.generated = g;
  cfg.inputs = {in};
  cfg.trials = 1;
  auto first = run_experiment(cfg);
  auto second = run_experiment(cfg);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].flops, second[0].flops);
  EXPECT_EQ(first[0].answer, second[0].answer);
  cfg.completed.insert(first[0].key());
  EXPECT_TRUE(run_experiment(cfg).empty());
}

TEST(DensitySweep, OneWinnerPerCell) {
  DensitySweepConfig cfg;
  cfg.scales = {6};
  cfg.input_degrees = {2, 4};
  cfg.mask_degrees = {1, 8};
  cfg.plans = every_plan();
  cfg.trials = 1;
  auto res = density_sweep(cfg);
  ASSERT_EQ(res.cells.size(), 4u);
  EXPECT_EQ(res.records.size(), 4u * 6u);
  for (const auto& c : res.cells) EXPECT_FALSE(c.winner.empty());
  std::ostringstream os;
  write_density_grid(os, res.cells);
  const std::string grid = os.str();
  EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), 5);
}
