#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lmopt/vec.hpp"

namespace lmopt {

using Rng = std::mt19937_64;

/// Independent sub-streams derived from one run seed. Pinning or skipping draws
/// on one stream never shifts another.
enum class StreamTag : std::uint32_t { Batch = 1, Init = 2, Interpolation = 3, Data = 4 };

Rng make_stream(std::uint64_t seed, StreamTag tag);

struct MiniBatch {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  bool operator==(const MiniBatch&) const = default;
};

/// Indices [0, N).
MiniBatch full_batch(std::size_t n);

/// B indices drawn uniformly with replacement from [0, N).
MiniBatch sample_batch(Rng& rng, std::size_t n, std::size_t batch_size);

/// Each coordinate ~ N(0, 1).
ParamVector standard_normal_vector(Rng& rng, std::size_t dim);

}  // namespace lmopt
