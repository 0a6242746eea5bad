#pragma once

// Deterministic block-parallel reduction shared by the OpenMP kernels.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lmopt/kernels.hpp"

namespace lmopt::kernels::detail {

/// body(slice, acc) must ADD the slice's contribution into acc (length `width`)
/// and return its scalar contribution. Results land in out (overwritten).
template <typename Body>
double blocked_reduce(std::span<const std::size_t> idx, std::size_t width, std::span<double> out,
                      Body&& body) {
  const std::size_t n = idx.size();
  const std::size_t nb = (n + kBlockSize - 1) / kBlockSize;
  std::fill(out.begin(), out.end(), 0.0);
  if (nb <= 1) return body(idx, out);

  std::vector<double> partial(nb * width, 0.0);
  std::vector<double> scalars(nb, 0.0);
  const long nblocks = static_cast<long>(nb);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t len = std::min(kBlockSize, n - lo);
    std::span<double> acc(partial.data() + static_cast<std::size_t>(b) * width, width);
    scalars[static_cast<std::size_t>(b)] = body(idx.subspan(lo, len), acc);
  }

  double total = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    total += scalars[b];
    const double* p = partial.data() + b * width;
    for (std::size_t j = 0; j < width; ++j) out[j] += p[j];
  }
  return total;
}

}  // namespace lmopt::kernels::detail
