#pragma once

// Shared fixtures: a hand-rolled random generator for property tests and a
// call-counting problem wrapper.

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <doctest.h>

#include "lmopt/dataset.hpp"
#include "lmopt/logreg.hpp"
#include "lmopt/problem.hpp"
#include "lmopt/sampling.hpp"

namespace testing {

using lmopt::MiniBatch;
using lmopt::ParamVector;

struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); }
  ParamVector vec(std::size_t d, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    ParamVector v(d);
    for (auto& e : v) e = n(rng);
    return v;
  }
  MiniBatch batch(std::size_t n, std::size_t b) { return lmopt::sample_batch(rng, n, b); }

  std::mt19937_64 rng;
};

/// Runs `body` on `cases` generators derived from `seed`; the case index is
/// reported on failure.
inline void for_all(std::size_t cases, std::uint64_t seed, const std::function<void(Gen&)>& body) {
  for (std::size_t c = 0; c < cases; ++c) {
    CAPTURE(c);
    Gen g(seed * 1000003ULL + c);
    body(g);
  }
}

inline std::shared_ptr<const lmopt::Dataset> small_data(std::size_t n = 20, std::size_t d = 5,
                                                        std::uint64_t seed = 3) {
  return std::make_shared<const lmopt::Dataset>(lmopt::synthesize_dataset(n, d, seed));
}

/// Forwards to an inner problem and records every oracle call's batch.
/// Full-batch calls (metrics) are tallied separately.
class CountingProblem final : public lmopt::Problem {
 public:
  explicit CountingProblem(const lmopt::Problem& inner) : inner_(inner) {}

  std::size_t dim() const override { return inner_.dim(); }
  std::size_t num_samples() const override { return inner_.num_samples(); }

  double value_grad(std::span<const double> x, const MiniBatch& batch, std::span<double> grad) const override {
    record(batch, false);
    return inner_.value_grad(x, batch, grad);
  }
  void hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
           std::span<double> out) const override {
    record(batch, true);
    inner_.hvp(x, v, batch, out);
  }

  struct Call {
    MiniBatch batch;
    bool is_hvp;
  };
  mutable std::vector<Call> calls;
  mutable std::size_t full_calls = 0;

 private:
  void record(const MiniBatch& b, bool hvp) const {
    if (b == full()) {
      ++full_calls;
      return;
    }
    calls.push_back({b, hvp});
  }
  const lmopt::Problem& inner_;
};

}  // namespace testing
