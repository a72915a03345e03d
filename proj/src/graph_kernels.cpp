#include "mspgemm/graph_kernels.hpp"

#include "mspgemm/generator.hpp"

namespace mspgemm {

std::vector<Index> random_sources(Index n, std::size_t count, std::uint64_t seed) {
  if (count > n) throw std::invalid_argument("more sources requested than vertices");
  // Partial Fisher-Yates over [0, n).
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t j = k + static_cast<std::size_t>(uniform01(rng) * double(n - k));
    std::swap(v[k], v[std::min<std::size_t>(j, n - 1)]);
  }
  v.resize(count);
  return v;
}

}  // namespace mspgemm
