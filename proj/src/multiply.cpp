#include "mspgemm/multiply.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>

namespace mspgemm {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Msa: return "MSA";
    case Algorithm::Hash: return "Hash";
    case Algorithm::Mca: return "MCA";
    case Algorithm::Heap: return "Heap";
    case Algorithm::HeapDot: return "HeapDot";
    case Algorithm::Inner: return "Inner";
  }
  return "?";
}

std::string_view to_string(Phases p) noexcept { return p == Phases::One ? "1P" : "2P"; }

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  if (iequals(name, "msa")) return Algorithm::Msa;
  if (iequals(name, "hash")) return Algorithm::Hash;
  if (iequals(name, "mca")) return Algorithm::Mca;
  if (iequals(name, "heap")) return Algorithm::Heap;
  if (iequals(name, "heapdot")) return Algorithm::HeapDot;
  if (iequals(name, "inner")) return Algorithm::Inner;
  return std::nullopt;
}

std::optional<Phases> parse_phases(std::string_view name) noexcept {
  if (iequals(name, "1p")) return Phases::One;
  if (iequals(name, "2p")) return Phases::Two;
  return std::nullopt;
}

void MultiplyPlan::validate() const {
  if (complemented && algorithm == Algorithm::Mca) throw PlanError("MCA does not support complemented masks");
  if (complemented && algorithm == Algorithm::Inner)
    throw PlanError("the inner-product algorithm does not support complemented masks");
  if (workers < 0) throw PlanError("worker count must be non-negative");
}

std::size_t MultiplyPlan::n_inspect() const noexcept {
  if (heap_inspect) return *heap_inspect;
  return algorithm == Algorithm::HeapDot ? kInspectAll : 1;
}

int MultiplyPlan::resolved_workers() const noexcept { return workers > 0 ? workers : omp_get_max_threads(); }

std::string MultiplyPlan::name() const {
  std::string s(to_string(algorithm));
  s += '-';
  s += to_string(phases);
  return s;
}

}  // namespace mspgemm
