#include "lmopt/sampling.hpp"

#include <numeric>

namespace lmopt {

Rng make_stream(std::uint64_t seed, StreamTag tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(tag),
                    0x6c6d6f70u};
  return Rng(seq);
}

MiniBatch full_batch(std::size_t n) {
  MiniBatch b;
  b.indices.resize(n);
  std::iota(b.indices.begin(), b.indices.end(), std::size_t{0});
  return b;
}

MiniBatch sample_batch(Rng& rng, std::size_t n, std::size_t batch_size) {
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (n < 1) throw ConfigError("cannot sample from an empty dataset");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  MiniBatch b;
  b.indices.resize(batch_size);
  for (auto& i : b.indices) i = pick(rng);
  return b;
}

ParamVector standard_normal_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ParamVector x(dim);
  for (auto& v : x) v = normal(rng);
  return x;
}

}  // namespace lmopt
