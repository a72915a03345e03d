#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mspgemm/generator.hpp"
#include "mspgemm/multiply.hpp"

namespace mspgemm::bench {

/// One benchmark measurement; the serialized columns follow kCsvHeader.
struct ExperimentRecord {
  std::string benchmark;
  std::string algorithm;
  std::string phases;
  bool complemented = false;
  std::string input;
  /// Generator parameters; -1 / NaN-free zero when the input is a file.
  int scale = -1;
  double degree = 0.0;
  double mask_degree = 0.0;
  int threads = 1;
  int trial = 0;
  double seconds = 0.0;
  std::uint64_t flops = 0;
  /// GFLOPS, or MTEPS for betweenness centrality.
  double metric = 0.0;

  // Not serialized.
  /// batch_size · num_edges for betweenness centrality, else 0.
  std::uint64_t traversed_edges = 0;
  /// Kernel answer: triangles, surviving edges, or the BC score sum.
  double answer = 0.0;
  /// Set when the plan was not run for this benchmark.
  std::string skipped;

  /// Identity of the experiment cell, used to resume sweeps.
  std::string key() const;
};

inline constexpr const char* kCsvHeader =
    "benchmark,algorithm,phases,complemented,input,scale,degree,mask_degree,threads,trial,seconds,flops,metric";

double gflops(std::uint64_t flops, double seconds) noexcept;
double mteps(std::uint64_t traversed_edges, double seconds) noexcept;

std::string to_csv_row(const ExperimentRecord& r);
ExperimentRecord parse_csv_row(const std::string& line, std::size_t lineno);
/// Appends rows, writing the header first when the file is new or empty.
void append_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
/// Missing file yields no records. Throws ParseError on a malformed file.
std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path);
std::vector<ExperimentRecord> read_csv(std::istream& in);

enum class Benchmark { Multiply, TriangleCount, KTruss, Bc };
std::string_view to_string(Benchmark b) noexcept;
std::optional<Benchmark> parse_benchmark(std::string_view name) noexcept;

/// A matrix read from disk or produced by the generator.
struct InputSpec {
  std::optional<std::filesystem::path> file;
  std::optional<GeneratorSpec> generated;

  std::string describe() const;
  CsrMatrix<double> load() const;
};

struct ExperimentConfig {
  Benchmark benchmark = Benchmark::TriangleCount;
  std::vector<MultiplyPlan> plans;
  std::vector<InputSpec> inputs;
  int trials = 5;
  int workers = 1;
  int k = 5;
  std::size_t batch = 512;
  std::uint64_t seed = 1;
  /// Mask degree for the plain Multiply benchmark (A, B, M all generated
  /// from the input spec with distinct seeds).
  double mask_degree = 8.0;
  /// Cells (ExperimentRecord::key) already measured; they are not rerun.
  std::set<std::string> completed;
};

/// Runs every (plan, input) cell `trials` times and keeps the fastest trial.
/// Timing covers only the masked multiplies. Unsupported combinations come
/// back as records with `skipped` set; `log` receives the reason.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct DensityCell {
  int scale = 0;
  double input_degree = 0;
  double mask_degree = 0;
  std::string winner;
  double best_seconds = 0;
};

struct DensitySweepConfig {
  std::vector<int> scales;
  std::vector<double> input_degrees;
  std::vector<double> mask_degrees;
  std::vector<MultiplyPlan> plans;
  int trials = 5;
  int workers = 1;
  std::uint64_t seed = 1;
};

struct DensitySweepResult {
  std::vector<DensityCell> cells;
  std::vector<ExperimentRecord> records;
};

/// For each (scale, input degree, mask degree) cell: Erdős–Rényi A, B, M;
/// every plan's output is checked against the first plan's before timing;
/// the fastest plan wins, ties going to the earlier plan.
DensitySweepResult density_sweep(const DensitySweepConfig& cfg, std::ostream* log = nullptr);

void write_density_grid(std::ostream& out, const std::vector<DensityCell>& cells);

enum class TrafficKind { Pull, Push };

struct TrafficInputs {
  double nnz_a = 0;
  double nnz_b = 0;
  double nnz_m = 0;
  double n = 1;
  /// Cache line length in words.
  double line_words = 8;
  double flops = 0;
};

/// Main-memory word traffic of the two algorithm families.
///   pull: nnz(A) + nnz(M)·(1 + nnz(B)/n)
///   push: nnz(A) + nnz(A)·L + flops(A·B)
/// The push estimate covers only the accesses that do not depend on the mask
/// or accumulator (A's nonzeros, B's row pointers, B's nonzeros).
double traffic_estimate(TrafficKind kind, const TrafficInputs& in) noexcept;

/// Per-scheme empirical CDF of slowdown relative to the per-input best.
struct PerformanceProfile {
  /// Inputs considered.
  std::vector<std::string> inputs;
  /// scheme -> ratios t/best, one per input, ascending; +inf when missing.
  std::map<std::string, std::vector<double>> ratios;

  /// Fraction of inputs on which `scheme` is within factor x of the best.
  double fraction_within(const std::string& scheme, double x) const;
  /// (x, y) breakpoints of the step curve for `scheme`.
  std::vector<std::pair<double, double>> curve(const std::string& scheme) const;
};

/// Scheme label of a record, e.g. "MSA-1P" or "Hash-2P-C" (complemented).
std::string scheme_label(const ExperimentRecord& r);

/// Groups records by (benchmark, input, threads); skipped records are ignored.
PerformanceProfile performance_profile(const std::vector<ExperimentRecord>& records);

void write_profile_table(std::ostream& out, const PerformanceProfile& profile,
                         const std::vector<double>& xs = {1.0, 1.1, 1.25, 1.5, 2.0, 4.0, 8.0, 16.0});

}  // namespace mspgemm::bench
