#include "mspgemm/generator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mspgemm {

void GeneratorSpec::validate() const {
  if (scale < 1 || scale > 30) throw std::invalid_argument("scale must be in [1, 30]");
  if (!(avg_degree > 0)) throw std::invalid_argument("average degree must be positive");
  if (kind == GraphKind::Rmat) {
    const auto& p = rmat;
    if (p.a < 0 || p.b < 0 || p.c < 0 || p.d < 0) throw std::invalid_argument("R-MAT probabilities must be >= 0");
    if (std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9) throw std::invalid_argument("R-MAT probabilities must sum to 1");
  }
}

std::uint64_t GeneratorSpec::edge_samples() const noexcept {
  return static_cast<std::uint64_t>(std::llround(avg_degree * double(dimension())));
}

std::string GeneratorSpec::describe() const {
  std::ostringstream os;
  os << (kind == GraphKind::Rmat ? "rmat" : "er") << "-s" << scale << "-d" << avg_degree << "-seed" << seed;
  return os.str();
}

int rmat_quadrant(double u, const RmatParams& p) noexcept {
  if (u < p.a) return 0;
  if (u < p.a + p.b) return 1;
  if (u < p.a + p.b + p.c) return 2;
  return 3;
}

std::pair<Index, Index> rmat_edge(Rng& rng, int scale, const RmatParams& p) noexcept {
  Index row = 0, col = 0;
  for (int level = 0; level < scale; ++level) {
    int q = rmat_quadrant(uniform01(rng), p);
    row = (row << 1) | Index(q >> 1);
    col = (col << 1) | Index(q & 1);
  }
  return {row, col};
}

std::vector<std::pair<Index, Index>> generate_edges(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::uint64_t m = spec.edge_samples();
  const std::uint64_t mask = spec.dimension() - 1;
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(m);
  for (std::uint64_t e = 0; e < m; ++e) {
    if (spec.kind == GraphKind::Rmat) {
      edges.push_back(rmat_edge(rng, spec.scale, spec.rmat));
    } else {
      Index i = Index(rng() & mask);
      Index j = Index(rng() & mask);
      edges.emplace_back(i, j);
    }
  }
  return edges;
}

}  // namespace mspgemm
