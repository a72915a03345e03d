#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mspgemm/bench.hpp"
#include "mspgemm/generator.hpp"
#include "mspgemm/graph_kernels.hpp"
#include "mspgemm/matrix_market.hpp"
#include "mspgemm/multiply.hpp"

namespace py = pybind11;
using namespace mspgemm;

namespace {

using Matrix = CsrMatrix<double>;

template <typename T>
py::array_t<T> to_numpy(std::span<const T> s) {
  return py::array_t<T>(static_cast<py::ssize_t>(s.size()), s.data());
}

template <typename T>
std::vector<T> to_vector(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
  return std::vector<T>(a.data(), a.data() + a.size());
}

MultiplyPlan make_plan(const std::string& algorithm, const std::string& phases, bool complemented, int threads) {
  MultiplyPlan plan;
  auto alg = parse_algorithm(algorithm);
  if (!alg) throw PlanError("unknown algorithm '" + algorithm + "'");
  auto ph = parse_phases(phases);
  if (!ph) throw PlanError("phases must be '1p' or '2p'");
  plan.algorithm = *alg;
  plan.phases = *ph;
  plan.complemented = complemented;
  plan.workers = threads;
  plan.validate();
  return plan;
}

py::dict stats_dict(const MultiplyStats& s) {
  py::dict d;
  d["flops"] = s.flops;
  d["evaluated"] = s.evaluated;
  d["allocated"] = s.allocated;
  d["output_nnz"] = s.output_nnz;
  d["hash_peak_load"] = s.hash.peak_load;
  d["symbolic_seconds"] = s.symbolic_seconds;
  d["numeric_seconds"] = s.numeric_seconds;
  d["seconds"] = s.total_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Masked sparse-sparse matrix multiplication C = M .* (A*B) and graph kernels built on it.";

  py::register_exception<PlanError>(m, "PlanError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<Matrix>(m, "CsrMatrix", "Immutable CSR matrix of float64 values with sorted rows.")
      .def(py::init([](std::pair<Index, Index> shape, py::array_t<Offset, py::array::c_style | py::array::forcecast> indptr,
                       py::array_t<Index, py::array::c_style | py::array::forcecast> indices,
                       py::array_t<double, py::array::c_style | py::array::forcecast> data) {
             return Matrix(shape.first, shape.second, to_vector(indptr), to_vector(indices), to_vector(data));
           }),
           py::arg("shape"), py::arg("indptr"), py::arg("indices"), py::arg("data"))
      .def_property_readonly("shape", [](const Matrix& a) { return std::make_pair(a.nrows(), a.ncols()); })
      .def_property_readonly("nnz", &Matrix::nnz)
      .def_property_readonly("indptr", [](const Matrix& a) { return to_numpy(a.row_ptr()); })
      .def_property_readonly("indices", [](const Matrix& a) { return to_numpy(a.col_idx()); })
      .def_property_readonly("data", [](const Matrix& a) { return to_numpy(a.values()); })
      .def("transpose", [](const Matrix& a) { return transpose(a); })
      .def("__eq__", [](const Matrix& a, const Matrix& b) { return a == b; })
      .def("__repr__", [](const Matrix& a) {
        return "<CsrMatrix " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) + ", nnz " +
               std::to_string(a.nnz()) + ">";
      });

  m.def(
      "from_triples",
      [](Index nrows, Index ncols, py::array_t<Index, py::array::c_style | py::array::forcecast> rows,
         py::array_t<Index, py::array::c_style | py::array::forcecast> cols,
         py::array_t<double, py::array::c_style | py::array::forcecast> vals) {
        auto r = to_vector(rows), c = to_vector(cols);
        auto v = to_vector(vals);
        if (r.size() != c.size() || r.size() != v.size())
          throw std::invalid_argument("rows, cols and vals must have equal length");
        std::vector<Triple<double>> t(r.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = {r[k], c[k], v[k]};
        return from_triples(nrows, ncols, t);
      },
      py::arg("nrows"), py::arg("ncols"), py::arg("rows"), py::arg("cols"), py::arg("vals"),
      "Builds a canonical CSR matrix; duplicate coordinates are summed.");

  m.def(
      "masked_multiply",
      [](const Matrix& mask, const Matrix& a, const Matrix& b, const std::string& algorithm, const std::string& phases,
         bool complemented, const std::string& semiring, int threads) {
        auto plan = make_plan(algorithm, phases, complemented, threads);
        MultiplyStats st;
        Matrix c;
        {
          py::gil_scoped_release release;
          if (semiring == "arith")
            c = masked_multiply<Arithmetic<double>>(MaskView(mask), a, b, plan, &st);
          else if (semiring == "pluspair")
            c = masked_multiply<PlusPair<double>>(MaskView(mask), a, b, plan, &st);
          else
            throw PlanError("semiring must be 'arith' or 'pluspair'");
        }
        return std::make_pair(std::move(c), stats_dict(st));
      },
      py::arg("mask"), py::arg("a"), py::arg("b"), py::arg("algorithm") = "msa", py::arg("phases") = "1p",
      py::arg("complemented") = false, py::arg("semiring") = "arith", py::arg("threads") = 1,
      "C = M .* (A*B), or (not M) .* (A*B) when complemented. Returns (C, stats).");

  m.def(
      "triangle_count",
      [](const Matrix& g, const std::string& algorithm, const std::string& phases, int threads) {
        auto plan = make_plan(algorithm, phases, false, threads);
        py::gil_scoped_release release;
        return triangle_count(g, plan).triangles;
      },
      py::arg("g"), py::arg("algorithm") = "msa", py::arg("phases") = "1p", py::arg("threads") = 1);

  m.def(
      "k_truss",
      [](const Matrix& g, int k, const std::string& algorithm, const std::string& phases, int threads) {
        auto plan = make_plan(algorithm, phases, false, threads);
        py::gil_scoped_release release;
        return pattern_cast<double>(k_truss(g, k, plan).graph);
      },
      py::arg("g"), py::arg("k") = 5, py::arg("algorithm") = "msa", py::arg("phases") = "1p", py::arg("threads") = 1);

  m.def(
      "betweenness_centrality",
      [](const Matrix& g, std::size_t batch_size, std::vector<Index> sources, const std::string& algorithm,
         const std::string& phases, int threads) {
        auto plan = make_plan(algorithm, phases, false, threads);
        BcResult r;
        {
          py::gil_scoped_release release;
          r = betweenness_centrality(g, BcConfig{batch_size, std::move(sources)}, plan);
        }
        return to_numpy(std::span<const double>(r.scores));
      },
      py::arg("g"), py::arg("batch_size") = 512, py::arg("sources") = std::vector<Index>{},
      py::arg("algorithm") = "msa", py::arg("phases") = "1p", py::arg("threads") = 1,
      "Unnormalized betweenness over ordered source/target pairs; all vertices are sources by default.");

  m.def(
      "generate",
      [](const std::string& kind, int scale, double degree, std::uint64_t seed, bool simple) {
        GeneratorSpec s;
        if (kind == "rmat")
          s.kind = GraphKind::Rmat;
        else if (kind != "er")
          throw std::invalid_argument("kind must be 'er' or 'rmat'");
        s.scale = scale;
        s.avg_degree = degree;
        s.seed = seed;
        auto a = generate<double>(s);
        return simple ? make_simple_graph<double>(a) : a;
      },
      py::arg("kind") = "rmat", py::arg("scale") = 10, py::arg("degree") = 16.0, py::arg("seed") = 1,
      py::arg("simple") = false);

  m.def(
      "traffic_estimate",
      [](const std::string& kind, double nnz_a, double nnz_b, double nnz_m, double n, double line_words,
         double flops) {
        bench::TrafficKind k;
        if (kind == "pull")
          k = bench::TrafficKind::Pull;
        else if (kind == "push")
          k = bench::TrafficKind::Push;
        else
          throw std::invalid_argument("kind must be 'pull' or 'push'");
        return bench::traffic_estimate(k, {nnz_a, nnz_b, nnz_m, n, line_words, flops});
      },
      py::arg("kind"), py::arg("nnz_a") = 0, py::arg("nnz_b") = 0, py::arg("nnz_m") = 0, py::arg("n") = 1,
      py::arg("line_words") = 8, py::arg("flops") = 0);

  m.def("read_matrix_market", [](const std::filesystem::path& p) { return read_matrix_market<double>(p); },
        py::arg("path"));
  m.def(
      "write_matrix_market",
      [](const std::filesystem::path& p, const Matrix& a, bool pattern) { write_matrix_market(p, a, pattern); },
      py::arg("path"), py::arg("matrix"), py::arg("pattern") = false);
}
