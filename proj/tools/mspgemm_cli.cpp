// Benchmark harness for masked SpGEMM: generators, single multiplies, the
// three graph kernels, parameter sweeps and performance profiles.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mspgemm/bench.hpp"
#include "mspgemm/generator.hpp"
#include "mspgemm/graph_kernels.hpp"
#include "mspgemm/matrix_market.hpp"
#include "mspgemm/multiply.hpp"

namespace {

using namespace mspgemm;
using namespace mspgemm::bench;

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string file;
  std::string gen;  // "er" or "rmat"
  int scale = 10;
  double degree = 8.0;
  std::uint64_t seed = 42;
  std::vector<double> rmat{0.57, 0.19, 0.19, 0.05};

  GeneratorSpec spec() const {
    GeneratorSpec s;
    s.kind = gen == "rmat" ? GraphKind::Rmat : GraphKind::ErdosRenyi;
    s.scale = scale;
    s.avg_degree = degree;
    s.seed = seed;
    if (rmat.size() != 4) throw UsageError("--rmat needs four probabilities a b c d");
    s.rmat = {rmat[0], rmat[1], rmat[2], rmat[3]};
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return s;
  }

  InputSpec input() const {
    InputSpec in;
    if (!file.empty())
      in.file = file;
    else if (!gen.empty())
      in.generated = spec();
    else
      throw UsageError("give an input file or --gen er|rmat");
    return in;
  }
};

void add_input_options(CLI::App* cmd, InputOptions& o, bool positional = true) {
  CLI::Option* file = positional ? cmd->add_option("input", o.file, "Matrix Market file")
                                 : cmd->add_option("--input", o.file, "Matrix Market file");
  auto* gen = cmd->add_option("--gen", o.gen, "Generate the input instead: er or rmat")
                  ->check(CLI::IsMember({"er", "rmat"}));
  file->excludes(gen);
  cmd->add_option("--scale", o.scale, "log2 of the generated dimension")->capture_default_str();
  cmd->add_option("--degree", o.degree, "Average degree of the generated input")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  cmd->add_option("--rmat", o.rmat, "R-MAT probabilities a b c d")->expected(4);
}

struct PlanOptions {
  std::vector<std::string> algos{"msa"};
  std::string phases = "1p";
  bool complemented = false;
  int threads = 1;
  std::size_t grain = 64;

  std::vector<MultiplyPlan> plans() const {
    std::vector<Algorithm> algs;
    for (const auto& a : algos) {
      if (a == "all") {
        algs.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
        continue;
      }
      auto parsed = parse_algorithm(a);
      if (!parsed) throw UsageError("unknown algorithm '" + a + "'");
      algs.push_back(*parsed);
    }
    std::vector<Phases> ph;
    if (phases == "both")
      ph = {Phases::One, Phases::Two};
    else if (auto p = parse_phases(phases))
      ph = {*p};
    else
      throw UsageError("--phases must be 1p, 2p or both");
    std::vector<MultiplyPlan> out;
    for (auto a : algs)
      for (auto p : ph) {
        MultiplyPlan plan;
        plan.algorithm = a;
        plan.phases = p;
        plan.complemented = complemented;
        plan.workers = threads;
        plan.grain = grain;
        out.push_back(plan);
      }
    return out;
  }

  MultiplyPlan single() const {
    auto ps = plans();
    if (ps.size() != 1) throw UsageError("this command runs exactly one algorithm and phase mode");
    try {
      ps.front().validate();
    } catch (const PlanError& e) {
      throw UsageError(e.what());
    }
    return ps.front();
  }
};

void add_plan_options(CLI::App* cmd, PlanOptions& o, bool many = false) {
  cmd->add_option("--algo", o.algos, many ? "Algorithms (msa hash mca heap heapdot inner, or all)"
                                          : "Algorithm: msa hash mca heap heapdot inner")
      ->capture_default_str();
  cmd->add_option("--phases", o.phases, many ? "1p, 2p or both" : "1p or 2p")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all)")->capture_default_str();
  cmd->add_option("--grain", o.grain, "Rows per scheduling chunk")->capture_default_str();
}

void emit_records(const std::string& csv, const std::vector<ExperimentRecord>& records) {
  if (!csv.empty()) append_csv(csv, records);
}

std::set<std::string> completed_keys(const std::string& csv) {
  std::set<std::string> keys;
  if (csv.empty()) return keys;
  for (const auto& r : read_csv(csv)) keys.insert(r.key());
  return keys;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PlanError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masked sparse-sparse matrix multiplication benchmarks"};
  app.require_subcommand(1);
  bool pin = false;
  app.add_flag("--pin", pin, "Ask the OpenMP runtime to bind threads to cores (best effort)");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated matrix in Matrix Market format");
  InputOptions gen_in;
  gen_in.gen = "er";
  std::string gen_out;
  bool gen_simple = false;
  gen->add_option("--kind", gen_in.gen, "er or rmat")->check(CLI::IsMember({"er", "rmat"}))->capture_default_str();
  gen->add_option("--scale", gen_in.scale)->capture_default_str();
  gen->add_option("--degree", gen_in.degree)->capture_default_str();
  gen->add_option("--seed", gen_in.seed)->capture_default_str();
  gen->add_option("--rmat", gen_in.rmat, "R-MAT probabilities a b c d")->expected(4);
  gen->add_flag("--simple", gen_simple, "Symmetrize and drop self-loops (undirected simple graph)");
  gen->add_option("-o,--output", gen_out, "Output path")->required();

  // multiply
  auto* mul = app.add_subcommand("multiply", "Run one masked multiply C = M .* (A*B)");
  InputOptions mul_in;
  PlanOptions mul_plan;
  std::string mul_b, mul_mask, mul_semiring = "arith", mul_csv;
  double mul_mask_degree = 8.0;
  int mul_trials = 1;
  add_input_options(mul, mul_in, false);
  add_plan_options(mul, mul_plan);
  mul->add_flag("--complemented", mul_plan.complemented, "Use the complemented mask");
  mul->add_option("--b", mul_b, "Matrix Market file for B (default: A, or generated)");
  mul->add_option("--mask", mul_mask, "Matrix Market file for M (default: A, or generated)");
  mul->add_option("--mask-degree", mul_mask_degree, "Degree of the generated mask")->capture_default_str();
  mul->add_option("--semiring", mul_semiring, "arith or pluspair")
      ->check(CLI::IsMember({"arith", "pluspair"}))
      ->capture_default_str();
  mul->add_option("--trials", mul_trials)->capture_default_str();
  mul->add_option("--csv", mul_csv, "Append the measurement to this CSV");

  // kernels
  auto* tri = app.add_subcommand("tricount", "Count triangles with sum(L .* (L*L))");
  auto* kt = app.add_subcommand("ktruss", "Compute the k-truss");
  auto* bc = app.add_subcommand("bc", "Batched betweenness centrality");
  InputOptions k_in;
  PlanOptions k_plan;
  int k_trials = 1, k_k = 5;
  std::size_t k_batch = 512;
  std::string k_csv;
  for (auto* cmd : {tri, kt, bc}) {
    add_input_options(cmd, k_in);
    add_plan_options(cmd, k_plan);
    cmd->add_option("--trials", k_trials)->capture_default_str();
    cmd->add_option("--csv", k_csv, "Append the measurement to this CSV");
  }
  kt->add_option("--k", k_k, "Truss order")->capture_default_str();
  bc->add_option("--batch", k_batch, "Sources per batch")->capture_default_str();

  // sweeps
  auto* sd = app.add_subcommand("sweep-density", "Best scheme over input and mask densities");
  std::vector<int> sd_scales{12};
  std::vector<double> sd_din{2, 4, 8, 16}, sd_dm{2, 4, 8, 16};
  PlanOptions sd_plan;
  sd_plan.algos = {"all"};
  sd_plan.phases = "both";
  int sd_trials = 5;
  std::uint64_t sd_seed = 1;
  std::string sd_csv, sd_grid;
  sd->add_option("--scales", sd_scales)->capture_default_str();
  sd->add_option("--input-degrees", sd_din)->capture_default_str();
  sd->add_option("--mask-degrees", sd_dm)->capture_default_str();
  add_plan_options(sd, sd_plan, true);
  sd->add_option("--trials", sd_trials)->capture_default_str();
  sd->add_option("--seed", sd_seed)->capture_default_str();
  sd->add_option("--csv", sd_csv, "Append all measurements to this CSV");
  sd->add_option("--grid", sd_grid, "Write the winner grid CSV here (default: stdout)");

  auto* ss = app.add_subcommand("sweep-scale", "Run a benchmark over R-MAT scales");
  auto* st = app.add_subcommand("sweep-threads", "Run a benchmark over worker counts");
  std::string sw_bench = "tricount", sw_csv;
  std::vector<int> ss_scales{10, 12, 14}, st_threads{1, 2, 4};
  InputOptions sw_in;
  sw_in.gen = "rmat";
  sw_in.degree = 16;
  PlanOptions sw_plan;
  sw_plan.algos = {"all"};
  sw_plan.phases = "both";
  int sw_trials = 5, sw_k = 5;
  std::size_t sw_batch = 512;
  double sw_mask_degree = 8.0;
  for (auto* cmd : {ss, st}) {
    cmd->add_option("--bench", sw_bench, "multiply, tricount, ktruss or bc")
        ->check(CLI::IsMember({"multiply", "tricount", "ktruss", "bc"}))
        ->capture_default_str();
    add_plan_options(cmd, sw_plan, true);
    cmd->add_flag("--complemented", sw_plan.complemented, "Complemented mask (multiply benchmark)");
    cmd->add_option("--trials", sw_trials)->capture_default_str();
    cmd->add_option("--k", sw_k)->capture_default_str();
    cmd->add_option("--batch", sw_batch)->capture_default_str();
    cmd->add_option("--mask-degree", sw_mask_degree)->capture_default_str();
    cmd->add_option("--csv", sw_csv, "Append to this CSV; cells already present are skipped");
  }
  ss->add_option("--scales", ss_scales)->capture_default_str();
  ss->add_option("--kind", sw_in.gen, "er or rmat")->check(CLI::IsMember({"er", "rmat"}))->capture_default_str();
  ss->add_option("--degree", sw_in.degree)->capture_default_str();
  ss->add_option("--seed", sw_in.seed)->capture_default_str();
  st->add_option("--threads-list", st_threads)->capture_default_str();
  add_input_options(st, sw_in, false);

  auto* prof = app.add_subcommand("profile", "Performance-profile table from a results CSV");
  std::string prof_csv;
  std::vector<double> prof_xs{1.0, 1.1, 1.25, 1.5, 2.0, 4.0, 8.0, 16.0};
  prof->add_option("csv", prof_csv, "Results CSV")->required();
  prof->add_option("--x", prof_xs, "Slowdown factors to tabulate")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (pin) setenv("OMP_PROC_BIND", "true", 0);

  if (*gen) {
    return guarded([&] {
      auto spec = gen_in.spec();
      auto m = generate<double>(spec);
      if (gen_simple) m = make_simple_graph<double>(m);
      write_matrix_market(gen_out, m, true);
      std::cout << "wrote " << gen_out << ": " << m.nrows() << " x " << m.ncols() << ", nnz " << m.nnz() << '\n';
    });
  }

  if (*mul) {
    return guarded([&] {
      auto plan = mul_plan.single();
      auto a = mul_in.input().load();
      CsrMatrix<double> b, m;
      if (!mul_b.empty())
        b = read_matrix_market<double>(mul_b);
      else if (!mul_in.gen.empty()) {
        auto s = mul_in.spec();
        s.seed += 1;
        b = generate<double>(s);
      } else
        b = a;
      if (!mul_mask.empty())
        m = read_matrix_market<double>(mul_mask);
      else if (!mul_in.gen.empty()) {
        auto s = mul_in.spec();
        s.seed += 2;
        s.avg_degree = mul_mask_degree;
        m = generate<double>(s);
      } else
        m = a;

      MultiplyStats best;
      best.total_seconds = std::numeric_limits<double>::infinity();
      int best_trial = 0;
      Offset nnz = 0;
      for (int t = 0; t < std::max(mul_trials, 1); ++t) {
        MultiplyStats s;
        if (mul_semiring == "pluspair")
          nnz = masked_multiply<PlusPair<double>>(MaskView(m), a, b, plan, &s).nnz();
        else
          nnz = masked_multiply<Arithmetic<double>>(MaskView(m), a, b, plan, &s).nnz();
        if (s.total_seconds < best.total_seconds) {
          best = s;
          best_trial = t;
        }
      }
      std::cout << "scheme " << plan.name() << (plan.complemented ? " (complemented)" : "") << '\n'
                << "nnz " << nnz << '\n'
                << "flops " << best.flops << '\n'
                << "evaluated " << best.evaluated << '\n'
                << "seconds " << best.total_seconds << '\n'
                << "gflops " << gflops(best.flops, best.total_seconds) << '\n';
      ExperimentRecord r;
      r.benchmark = "multiply";
      r.algorithm = std::string(to_string(plan.algorithm));
      r.phases = std::string(to_string(plan.phases));
      r.complemented = plan.complemented;
      auto in = mul_in.input();
      r.input = in.describe();
      if (in.generated) {
        r.scale = in.generated->scale;
        r.degree = in.generated->avg_degree;
        r.mask_degree = mul_mask_degree;
      }
      r.threads = plan.resolved_workers();
      r.trial = best_trial;
      r.seconds = best.total_seconds;
      r.flops = best.flops;
      r.metric = gflops(best.flops, best.total_seconds);
      emit_records(mul_csv, {r});
    });
  }

  for (auto* cmd : {tri, kt, bc}) {
    if (!*cmd) continue;
    return guarded([&] {
      auto plan = k_plan.single();
      ExperimentConfig cfg;
      cfg.benchmark = cmd == tri ? Benchmark::TriangleCount : cmd == kt ? Benchmark::KTruss : Benchmark::Bc;
      cfg.plans = {plan};
      cfg.inputs = {k_in.input()};
      cfg.trials = std::max(k_trials, 1);
      cfg.workers = plan.workers;
      cfg.k = k_k;
      cfg.batch = k_batch;
      cfg.seed = k_in.seed;
      auto recs = run_experiment(cfg, &std::cerr);
      const auto& r = recs.front();
      if (!r.skipped.empty()) throw UsageError(r.skipped);
      if (cmd == tri)
        std::cout << static_cast<std::uint64_t>(r.answer) << '\n';
      else if (cmd == kt)
        std::cout << "edges " << static_cast<std::uint64_t>(r.answer) / 2 << '\n';
      else
        std::cout << "score_sum " << r.answer << '\n' << "mteps " << r.metric << '\n';
      std::cerr << "seconds " << r.seconds << " flops " << r.flops << '\n';
      emit_records(k_csv, recs);
    });
  }

  if (*sd) {
    return guarded([&] {
      DensitySweepConfig cfg;
      cfg.scales = sd_scales;
      cfg.input_degrees = sd_din;
      cfg.mask_degrees = sd_dm;
      cfg.plans = sd_plan.plans();
      cfg.trials = std::max(sd_trials, 1);
      cfg.workers = sd_plan.threads;
      cfg.seed = sd_seed;
      for (const auto& p : cfg.plans) {
        try {
          p.validate();
        } catch (const PlanError& e) {
          throw UsageError(e.what());
        }
      }
      auto res = density_sweep(cfg, &std::cerr);
      emit_records(sd_csv, res.records);
      if (sd_grid.empty()) {
        write_density_grid(std::cout, res.cells);
      } else {
        std::ostringstream os;
        write_density_grid(os, res.cells);
        write_text_file(sd_grid, os.str());
      }
    });
  }

  if (*ss || *st) {
    return guarded([&] {
      ExperimentConfig cfg;
      cfg.benchmark = *parse_benchmark(sw_bench);
      cfg.plans = sw_plan.plans();
      cfg.trials = std::max(sw_trials, 1);
      cfg.k = sw_k;
      cfg.batch = sw_batch;
      cfg.mask_degree = sw_mask_degree;
      cfg.seed = sw_in.seed;
      cfg.completed = completed_keys(sw_csv);
      std::vector<ExperimentRecord> all;
      if (*ss) {
        for (int s : ss_scales) {
          InputOptions o = sw_in;
          if (o.gen.empty()) o.gen = "rmat";
          o.scale = s;
          cfg.inputs.push_back(o.input());
        }
        cfg.workers = sw_plan.threads;
        all = run_experiment(cfg, &std::cerr);
        emit_records(sw_csv, all);
      } else {
        cfg.inputs = {sw_in.input()};
        for (int t : st_threads) {
          cfg.workers = t;
          auto recs = run_experiment(cfg, &std::cerr);
          emit_records(sw_csv, recs);
          all.insert(all.end(), recs.begin(), recs.end());
        }
      }
      std::cout << kCsvHeader << '\n';
      for (const auto& r : all)
        if (r.skipped.empty()) std::cout << to_csv_row(r) << '\n';
    });
  }

  if (*prof) {
    return guarded([&] {
      if (!std::filesystem::exists(prof_csv)) throw std::runtime_error("no such file: " + prof_csv);
      auto profile = performance_profile(read_csv(prof_csv));
      write_profile_table(std::cout, profile, prof_xs);
    });
  }
  return kOk;
}
