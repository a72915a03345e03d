#pragma once

#include <filesystem>
#include <istream>
#include <limits>
#include <sstream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "mspgemm/csr.hpp"

namespace mspgemm {

enum class MmField { Real, Integer, Pattern };
enum class MmSymmetry { General, Symmetric };

/// Coordinate entries as stored in a Matrix Market file, already 0-based and
/// with symmetric files expanded to both triangles.
struct MatrixMarketData {
  Index nrows = 0;
  Index ncols = 0;
  MmField field = MmField::Real;
  MmSymmetry symmetry = MmSymmetry::General;
  std::vector<Index> rows;
  std::vector<Index> cols;
  /// Empty for pattern files.
  std::vector<double> values;
};

/// Parses coordinate real/integer/pattern × general/symmetric. Throws
/// ParseError carrying the offending line number.
MatrixMarketData parse_matrix_market(std::istream& in);
MatrixMarketData parse_matrix_market(const std::filesystem::path& path);

/// Reads a Matrix Market file into canonical CSR. Pattern entries get the
/// value 1; duplicate coordinates are summed.
template <typename T>
CsrMatrix<T> read_matrix_market(const std::filesystem::path& path) {
  auto mm = parse_matrix_market(path);
  std::vector<Triple<T>> triples(mm.rows.size());
  for (std::size_t k = 0; k < mm.rows.size(); ++k)
    triples[k] = {mm.rows[k], mm.cols[k], mm.values.empty() ? T(1) : static_cast<T>(mm.values[k])};
  return from_triples(mm.nrows, mm.ncols, triples);
}

template <typename T>
CsrMatrix<T> read_matrix_market(std::istream& in) {
  auto mm = parse_matrix_market(in);
  std::vector<Triple<T>> triples(mm.rows.size());
  for (std::size_t k = 0; k < mm.rows.size(); ++k)
    triples[k] = {mm.rows[k], mm.cols[k], mm.values.empty() ? T(1) : static_cast<T>(mm.values[k])};
  return from_triples(mm.nrows, mm.ncols, triples);
}

/// Writes a general coordinate file. Integral value types are written as
/// `integer`, floating point with round-trip precision as `real`.
template <typename T>
void write_matrix_market(std::ostream& out, const CsrMatrix<T>& a, bool pattern = false) {
  const char* field = pattern ? "pattern" : (std::is_integral_v<T> ? "integer" : "real");
  out << "%%MatrixMarket matrix coordinate " << field << " general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  if constexpr (std::is_floating_point_v<T>) out.precision(std::numeric_limits<T>::max_digits10);
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      out << (i + 1) << ' ' << (cols[p] + 1);
      if (!pattern) out << ' ' << vals[p];
      out << '\n';
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents);

template <typename T>
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix<T>& a, bool pattern = false) {
  std::ostringstream os;
  write_matrix_market(os, a, pattern);
  write_text_file(path, os.str());
}

}  // namespace mspgemm
