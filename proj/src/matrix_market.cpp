#include "mspgemm/matrix_market.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace mspgemm {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Splits on blanks; returns false if a token is missing.
bool next_token(std::string_view& line, std::string_view& tok) {
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return false;
  std::size_t e = line.find_first_of(" \t\r", b);
  if (e == std::string_view::npos) e = line.size();
  tok = line.substr(b, e - b);
  line.remove_prefix(e);
  return true;
}

template <typename U>
U parse_uint(std::string_view tok, std::size_t lineno, const char* what) {
  U v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range) throw ParseError(std::string(what) + " overflows", lineno);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", lineno);
  return v;
}

double parse_real(std::string_view tok, std::size_t lineno) {
  std::string s(tok);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("malformed value '" + s + "'", lineno);
  }
  if (used != s.size()) throw ParseError("malformed value '" + s + "'", lineno);
  return v;
}

}  // namespace

MatrixMarketData parse_matrix_market(std::istream& in) {
  MatrixMarketData mm;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
    if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
    if (lower(format) != "coordinate") throw ParseError("only coordinate format is supported", lineno);
    field = lower(field);
    if (field == "real" || field == "double")
      mm.field = MmField::Real;
    else if (field == "integer")
      mm.field = MmField::Integer;
    else if (field == "pattern")
      mm.field = MmField::Pattern;
    else
      throw ParseError("unsupported field '" + field + "'", lineno);
    symmetry = lower(symmetry);
    if (symmetry == "general")
      mm.symmetry = MmSymmetry::General;
    else if (symmetry == "symmetric")
      mm.symmetry = MmSymmetry::Symmetric;
    else
      throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }

  // Size line, after comments and blank lines.
  std::uint64_t declared = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
    ++lineno;
    std::string_view sv(line);
    std::string_view tok;
    if (sv.starts_with('%') || !next_token(sv, tok)) continue;
    std::uint64_t r = parse_uint<std::uint64_t>(tok, lineno, "row count");
    if (!next_token(sv, tok)) throw ParseError("size line needs rows, columns and entries", lineno);
    std::uint64_t c = parse_uint<std::uint64_t>(tok, lineno, "column count");
    if (!next_token(sv, tok)) throw ParseError("size line needs rows, columns and entries", lineno);
    declared = parse_uint<std::uint64_t>(tok, lineno, "entry count");
    if (r >= std::numeric_limits<Index>::max() || c >= std::numeric_limits<Index>::max())
      throw ParseError("dimension exceeds the index type", lineno);
    mm.nrows = static_cast<Index>(r);
    mm.ncols = static_cast<Index>(c);
    if (mm.symmetry == MmSymmetry::Symmetric && r != c) throw ParseError("symmetric matrix must be square", lineno);
    break;
  }

  const bool has_value = mm.field != MmField::Pattern;
  mm.rows.reserve(declared);
  mm.cols.reserve(declared);
  if (has_value) mm.values.reserve(declared);

  std::uint64_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    std::string_view tok;
    if (sv.starts_with('%') || !next_token(sv, tok)) continue;
    if (seen == declared) throw ParseError("more entries than declared", lineno);
    auto r = parse_uint<std::uint64_t>(tok, lineno, "row index");
    if (!next_token(sv, tok)) throw ParseError("entry needs a column index", lineno);
    auto c = parse_uint<std::uint64_t>(tok, lineno, "column index");
    if (r == 0 || c == 0) throw ParseError("indices are 1-based; found 0", lineno);
    if (r > mm.nrows || c > mm.ncols) throw ParseError("index outside the declared dimensions", lineno);
    double v = 1.0;
    if (has_value) {
      if (!next_token(sv, tok)) throw ParseError("entry needs a value", lineno);
      v = parse_real(tok, lineno);
    }
    Index i = static_cast<Index>(r - 1), j = static_cast<Index>(c - 1);
    mm.rows.push_back(i);
    mm.cols.push_back(j);
    if (has_value) mm.values.push_back(v);
    if (mm.symmetry == MmSymmetry::Symmetric && i != j) {
      mm.rows.push_back(j);
      mm.cols.push_back(i);
      if (has_value) mm.values.push_back(v);
    }
    ++seen;
  }
  if (seen != declared)
    throw ParseError("expected " + std::to_string(declared) + " entries, found " + std::to_string(seen), lineno);
  return mm;
}

MatrixMarketData parse_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return parse_matrix_market(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mspgemm
