#include "mspgemm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mspgemm/graph_kernels.hpp"
#include "mspgemm/matrix_market.hpp"

namespace mspgemm::bench {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename F>
auto parse_field(const std::string& s, std::size_t lineno, const char* name, F&& conv) {
  try {
    std::size_t used = 0;
    auto v = conv(s, &used);
    if (used != s.size()) throw std::invalid_argument(name);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + name + " '" + s + "'", lineno);
  }
}

std::string skip_reason(Benchmark b, const MultiplyPlan& p) {
  const bool needs_complement = b == Benchmark::Bc || (b == Benchmark::Multiply && p.complemented);
  if (b == Benchmark::Bc && p.algorithm == Algorithm::Inner)
    return "Inner is excluded from betweenness centrality: complemented pull multiplies are unsupported";
  if (needs_complement && p.algorithm == Algorithm::Mca) return "MCA does not support complemented masks";
  if (needs_complement && p.algorithm == Algorithm::Inner) return "Inner does not support complemented masks";
  if ((b == Benchmark::TriangleCount || b == Benchmark::KTruss) && p.complemented)
    return std::string(to_string(b)) + " uses a plain mask";
  return {};
}

struct Measurement {
  double seconds = 0;
  std::uint64_t flops = 0;
  std::uint64_t traversed = 0;
  double answer = 0;
};

}  // namespace

std::string ExperimentRecord::key() const {
  std::ostringstream os;
  os << benchmark << '|' << algorithm << '|' << phases << '|' << complemented << '|' << input << '|' << threads;
  return os.str();
}

double gflops(std::uint64_t flops, double seconds) noexcept {
  return seconds > 0 ? double(flops) / seconds / 1e9 : 0.0;
}

double mteps(std::uint64_t traversed_edges, double seconds) noexcept {
  return seconds > 0 ? double(traversed_edges) / seconds / 1e6 : 0.0;
}

std::string to_csv_row(const ExperimentRecord& r) {
  std::ostringstream os;
  os << r.benchmark << ',' << r.algorithm << ',' << r.phases << ',' << (r.complemented ? 1 : 0) << ',' << r.input
     << ',' << r.scale << ',' << format_double(r.degree) << ',' << format_double(r.mask_degree) << ',' << r.threads
     << ',' << r.trial << ',' << format_double(r.seconds) << ',' << r.flops << ',' << format_double(r.metric);
  return os.str();
}

ExperimentRecord parse_csv_row(const std::string& line, std::size_t lineno) {
  auto cells = split_commas(line);
  if (cells.size() != 13) throw ParseError("expected 13 columns, found " + std::to_string(cells.size()), lineno);
  ExperimentRecord r;
  r.benchmark = cells[0];
  r.algorithm = cells[1];
  r.phases = cells[2];
  if (cells[3] != "0" && cells[3] != "1") throw ParseError("complemented must be 0 or 1", lineno);
  r.complemented = cells[3] == "1";
  r.input = cells[4];
  auto to_int = [](const std::string& s, std::size_t* u) { return std::stoi(s, u); };
  auto to_dbl = [](const std::string& s, std::size_t* u) { return std::stod(s, u); };
  auto to_u64 = [](const std::string& s, std::size_t* u) { return std::stoull(s, u); };
  r.scale = parse_field(cells[5], lineno, "scale", to_int);
  r.degree = parse_field(cells[6], lineno, "degree", to_dbl);
  r.mask_degree = parse_field(cells[7], lineno, "mask_degree", to_dbl);
  r.threads = parse_field(cells[8], lineno, "threads", to_int);
  r.trial = parse_field(cells[9], lineno, "trial", to_int);
  r.seconds = parse_field(cells[10], lineno, "seconds", to_dbl);
  r.flops = parse_field(cells[11], lineno, "flops", to_u64);
  r.metric = parse_field(cells[12], lineno, "metric", to_dbl);
  return r;
}

void append_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  if (fresh) out << kCsvHeader << '\n';
  for (const auto& r : records)
    if (r.skipped.empty()) out << to_csv_row(r) << '\n';
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kCsvHeader) throw ParseError("unexpected CSV header", lineno);
      continue;
    }
    out.push_back(parse_csv_row(line, lineno));
  }
  return out;
}

std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

std::string_view to_string(Benchmark b) noexcept {
  switch (b) {
    case Benchmark::Multiply: return "multiply";
    case Benchmark::TriangleCount: return "tricount";
    case Benchmark::KTruss: return "ktruss";
    case Benchmark::Bc: return "bc";
  }
  return "?";
}

std::optional<Benchmark> parse_benchmark(std::string_view name) noexcept {
  if (name == "multiply") return Benchmark::Multiply;
  if (name == "tricount") return Benchmark::TriangleCount;
  if (name == "ktruss") return Benchmark::KTruss;
  if (name == "bc") return Benchmark::Bc;
  return std::nullopt;
}

std::string InputSpec::describe() const {
  if (generated) return generated->describe();
  if (file) {
    std::string s = file->filename().string();
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
  }
  return "none";
}

CsrMatrix<double> InputSpec::load() const {
  if (generated) return generate<double>(*generated);
  if (file) return read_matrix_market<double>(*file);
  throw std::invalid_argument("input names neither a file nor a generator");
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::vector<ExperimentRecord> records;

  for (const auto& input : cfg.inputs) {
    auto raw = input.load();
    const bool graph_kernel = cfg.benchmark != Benchmark::Multiply;
    CsrMatrix<double> graph = graph_kernel ? make_simple_graph<double>(raw) : raw;

    // Operands of the plain multiply benchmark.
    CsrMatrix<double> mul_b, mul_m;
    if (!graph_kernel) {
      if (input.generated) {
        GeneratorSpec gb = *input.generated, gm = *input.generated;
        gb.seed += 1;
        gm.seed += 2;
        gm.avg_degree = cfg.mask_degree;
        mul_b = generate<double>(gb);
        mul_m = generate<double>(gm);
      } else {
        mul_b = raw;
        mul_m = raw;
      }
    }
    std::vector<Index> bc_sources;
    if (cfg.benchmark == Benchmark::Bc)
      bc_sources = random_sources(graph.nrows(), std::min<std::size_t>(cfg.batch, graph.nrows()), cfg.seed);

    for (auto plan : cfg.plans) {
      plan.workers = cfg.workers;
      ExperimentRecord rec;
      rec.benchmark = std::string(to_string(cfg.benchmark));
      rec.algorithm = std::string(to_string(plan.algorithm));
      rec.phases = std::string(to_string(plan.phases));
      rec.complemented = plan.complemented;
      rec.input = input.describe();
      if (input.generated) {
        rec.scale = input.generated->scale;
        rec.degree = input.generated->avg_degree;
      } else {
        rec.degree = raw.nrows() ? double(raw.nnz()) / raw.nrows() : 0.0;
      }
      if (cfg.benchmark == Benchmark::Multiply) rec.mask_degree = cfg.mask_degree;
      rec.threads = plan.resolved_workers();

      if (cfg.completed.contains(rec.key())) {
        if (log) *log << "skip " << rec.key() << ": already measured\n";
        continue;
      }
      if (auto why = skip_reason(cfg.benchmark, plan); !why.empty()) {
        rec.skipped = why;
        if (log) *log << "skip " << plan.name() << " on " << rec.input << ": " << why << '\n';
        records.push_back(rec);
        continue;
      }

      std::optional<Measurement> best;
      for (int t = 0; t < cfg.trials; ++t) {
        Measurement m;
        switch (cfg.benchmark) {
          case Benchmark::Multiply: {
            MultiplyStats st;
            auto c = masked_multiply<Arithmetic<double>>(MaskView(mul_m), raw, mul_b, plan, &st);
            m = {st.total_seconds, st.flops, 0, double(c.nnz())};
            break;
          }
          case Benchmark::TriangleCount: {
            auto r = triangle_count(graph, plan);
            m = {r.stats.multiply_seconds(), r.stats.flops(), 0, double(r.triangles)};
            break;
          }
          case Benchmark::KTruss: {
            auto r = k_truss(graph, cfg.k, plan);
            m = {r.stats.multiply_seconds(), r.stats.flops(), 0, double(r.graph.nnz())};
            break;
          }
          case Benchmark::Bc: {
            BcConfig bc{cfg.batch, bc_sources};
            auto r = betweenness_centrality(graph, bc, plan);
            double sum = 0;
            for (double s : r.scores) sum += s;
            m = {r.stats.multiply_seconds(), r.stats.flops(), std::uint64_t(bc_sources.size()) * graph.nnz(), sum};
            break;
          }
        }
        if (!best || m.seconds < best->seconds) {
          best = m;
          rec.trial = t;
        }
      }
      rec.seconds = best->seconds;
      rec.flops = best->flops;
      rec.traversed_edges = best->traversed;
      rec.answer = best->answer;
      rec.metric = cfg.benchmark == Benchmark::Bc ? mteps(rec.traversed_edges, rec.seconds) : gflops(rec.flops, rec.seconds);
      if (log) *log << plan.name() << " on " << rec.input << ": " << rec.seconds << " s, metric " << rec.metric << '\n';
      records.push_back(std::move(rec));
    }
  }
  return records;
}

DensitySweepResult density_sweep(const DensitySweepConfig& cfg, std::ostream* log) {
  DensitySweepResult result;
  using SR = Arithmetic<double>;
  for (int scale : cfg.scales)
    for (double din : cfg.input_degrees)
      for (double dm : cfg.mask_degrees) {
        GeneratorSpec ga{GraphKind::ErdosRenyi, scale, din, {}, cfg.seed};
        GeneratorSpec gb = ga, gm = ga;
        gb.seed = cfg.seed + 1;
        gm.seed = cfg.seed + 2;
        gm.avg_degree = dm;
        auto a = generate<double>(ga);
        auto b = generate<double>(gb);
        auto m = generate<double>(gm);

        std::optional<CsrMatrix<double>> reference;
        DensityCell cell{scale, din, dm, "", 0.0};
        for (auto plan : cfg.plans) {
          plan.workers = cfg.workers;
          plan.validate();
          auto c = masked_multiply<SR>(MaskView(m), a, b, plan);
          if (!reference)
            reference = std::move(c);
          else if (!(*reference == c))
            throw InternalError("plans disagree on density cell (" + std::to_string(scale) + ", " +
                                format_double(din) + ", " + format_double(dm) + ")");

          double best = std::numeric_limits<double>::infinity();
          std::uint64_t flops = 0;
          int best_trial = 0;
          for (int t = 0; t < cfg.trials; ++t) {
            MultiplyStats st;
            masked_multiply<SR>(MaskView(m), a, b, plan, &st);
            if (st.total_seconds < best) {
              best = st.total_seconds;
              best_trial = t;
            }
            flops = st.flops;
          }
          ExperimentRecord rec;
          rec.benchmark = "density";
          rec.algorithm = std::string(to_string(plan.algorithm));
          rec.phases = std::string(to_string(plan.phases));
          rec.complemented = plan.complemented;
          rec.input = ga.describe();
          rec.scale = scale;
          rec.degree = din;
          rec.mask_degree = dm;
          rec.threads = plan.resolved_workers();
          rec.trial = best_trial;
          rec.seconds = best;
          rec.flops = flops;
          rec.metric = gflops(flops, best);
          result.records.push_back(rec);
          if (cell.winner.empty() || best < cell.best_seconds) {
            cell.winner = plan.name();
            cell.best_seconds = best;
          }
        }
        if (log) *log << "scale " << scale << " d_in " << din << " d_mask " << dm << ": " << cell.winner << '\n';
        result.cells.push_back(cell);
      }
  return result;
}

void write_density_grid(std::ostream& out, const std::vector<DensityCell>& cells) {
  out << "scale,input_degree,mask_degree,winner,seconds\n";
  for (const auto& c : cells)
    out << c.scale << ',' << format_double(c.input_degree) << ',' << format_double(c.mask_degree) << ',' << c.winner
        << ',' << format_double(c.best_seconds) << '\n';
}

double traffic_estimate(TrafficKind kind, const TrafficInputs& in) noexcept {
  if (kind == TrafficKind::Pull) return in.nnz_a + in.nnz_m * (1.0 + in.nnz_b / in.n);
  return in.nnz_a + in.nnz_a * in.line_words + in.flops;
}

std::string scheme_label(const ExperimentRecord& r) {
  std::string s = r.algorithm + "-" + r.phases;
  if (r.complemented) s += "-C";
  return s;
}

double PerformanceProfile::fraction_within(const std::string& scheme, double x) const {
  auto it = ratios.find(scheme);
  if (it == ratios.end() || it->second.empty()) return 0.0;
  const auto& r = it->second;
  auto n = std::upper_bound(r.begin(), r.end(), x) - r.begin();
  return double(n) / double(r.size());
}

std::vector<std::pair<double, double>> PerformanceProfile::curve(const std::string& scheme) const {
  std::vector<std::pair<double, double>> pts;
  auto it = ratios.find(scheme);
  if (it == ratios.end()) return pts;
  const auto& r = it->second;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (std::isinf(r[k])) break;
    if (k + 1 < r.size() && r[k + 1] == r[k]) continue;
    pts.emplace_back(r[k], double(k + 1) / double(r.size()));
  }
  return pts;
}

PerformanceProfile performance_profile(const std::vector<ExperimentRecord>& records) {
  // (benchmark|input|threads) -> scheme -> best seconds
  std::map<std::string, std::map<std::string, double>> table;
  std::set<std::string> schemes;
  for (const auto& r : records) {
    if (!r.skipped.empty()) continue;
    std::string in = r.benchmark + "|" + r.input + "|" + std::to_string(r.threads);
    std::string s = scheme_label(r);
    schemes.insert(s);
    auto [it, fresh] = table[in].try_emplace(s, r.seconds);
    if (!fresh) it->second = std::min(it->second, r.seconds);
  }
  PerformanceProfile p;
  for (const auto& s : schemes) p.ratios[s];
  for (const auto& [in, times] : table) {
    p.inputs.push_back(in);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [s, t] : times) best = std::min(best, t);
    for (const auto& s : schemes) {
      auto it = times.find(s);
      double ratio = std::numeric_limits<double>::infinity();
      if (it != times.end()) ratio = best > 0 ? it->second / best : (it->second > 0 ? ratio : 1.0);
      p.ratios[s].push_back(ratio);
    }
  }
  for (auto& [s, r] : p.ratios) std::sort(r.begin(), r.end());
  return p;
}

void write_profile_table(std::ostream& out, const PerformanceProfile& profile, const std::vector<double>& xs) {
  out << "scheme";
  for (double x : xs) out << ",y(" << format_double(x) << ")";
  out << '\n';
  for (const auto& [s, r] : profile.ratios) {
    out << s;
    for (double x : xs) out << ',' << std::fixed << std::setprecision(4) << profile.fraction_within(s, x);
    out << std::defaultfloat << '\n';
  }
}

}  // namespace mspgemm::bench
