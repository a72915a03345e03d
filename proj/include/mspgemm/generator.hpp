#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mspgemm/csr.hpp"

namespace mspgemm {

enum class GraphKind { ErdosRenyi, Rmat };

/// Recursive-quadrant probabilities: a (top-left), b (top-right),
/// c (bottom-left), d (bottom-right).
struct RmatParams {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
};

/// Graph500 R-MAT probabilities.
inline constexpr RmatParams kGraph500Rmat{0.57, 0.19, 0.19, 0.05};

struct GeneratorSpec {
  GraphKind kind = GraphKind::ErdosRenyi;
  /// log2 of the dimension.
  int scale = 10;
  /// Edges sampled = round(avg_degree · 2^scale), before merging duplicates.
  double avg_degree = 8.0;
  RmatParams rmat{};
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;
  Index dimension() const noexcept { return Index(1) << scale; }
  std::uint64_t edge_samples() const noexcept;
  /// Short descriptor, e.g. "rmat-s8-d16-seed42".
  std::string describe() const;
};

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) noexcept { return double(rng() >> 11) * 0x1.0p-53; }

/// Quadrant 0..3 (a, b, c, d) selected by a uniform draw `u`.
int rmat_quadrant(double u, const RmatParams& p) noexcept;

/// One R-MAT edge in a 2^scale x 2^scale matrix.
std::pair<Index, Index> rmat_edge(Rng& rng, int scale, const RmatParams& p) noexcept;

/// Sampled edge list (with duplicates) for `spec`. Pure function of the spec.
std::vector<std::pair<Index, Index>> generate_edges(const GeneratorSpec& spec);

/// Directed 2^scale x 2^scale matrix with duplicates merged and every stored
/// value 1. Self-loops are kept; make_simple_graph removes them for graph use.
template <typename T>
CsrMatrix<T> generate(const GeneratorSpec& spec) {
  auto edges = generate_edges(spec);
  std::vector<Triple<T>> triples;
  triples.reserve(edges.size());
  for (auto [i, j] : edges) triples.push_back({i, j, T(1)});
  Index n = spec.dimension();
  return from_triples(n, n, triples, [](T x, T) { return x; });
}

}  // namespace mspgemm
