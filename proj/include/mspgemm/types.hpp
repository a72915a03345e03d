#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mspgemm {

/// Row/column index. 32 bits are enough for every matrix dimension we handle.
using Index = std::uint32_t;
/// Position into the nonzero arrays; inputs may exceed 2^32 nonzeros.
using Offset = std::uint64_t;

/// Inputs have mismatching dimensions or violate a structural precondition.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Indices outside the declared shape, or otherwise invalid construction input.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested algorithm/option combination is not supported.
class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed Matrix Market (or CSV) input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  /// 1-based line of the offending input; 0 when no line applies.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An internal bound was violated (buffer overflow, full hash table, ...).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define MSPGEMM_CHECK(cond, msg)                 \
  do {                                           \
    if (!(cond)) throw ::mspgemm::InternalError(msg); \
  } while (0)

}  // namespace mspgemm
