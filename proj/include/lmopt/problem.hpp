#pragma once

#include <cstddef>
#include <span>

#include "lmopt/sampling.hpp"
#include "lmopt/vec.hpp"

namespace lmopt {

/// Serial: plain per-sample loops (reference path).
/// Parallel: fixed 64-sample blocks reduced in block order, so results do not
/// depend on the OpenMP thread count.
enum class ExecPolicy { Serial, Parallel };

/// Finite-sum objective f(x) = (1/N) sum_i f_i(x) with mini-batch oracles.
/// Implementations are immutable after construction and safe to share across threads.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t num_samples() const = 0;

  /// Returns f_B(x) and writes grad f_B(x) into `grad`.
  virtual double value_grad(std::span<const double> x, const MiniBatch& batch,
                            std::span<double> grad) const = 0;

  /// Writes grad^2 f_B(x) v into `out`.
  virtual void hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
                   std::span<double> out) const = 0;

  virtual double value(std::span<const double> x, const MiniBatch& batch) const {
    ParamVector g(dim());
    return value_grad(x, batch, g);
  }

  ParamVector gradient(std::span<const double> x, const MiniBatch& batch) const {
    ParamVector g(dim());
    value_grad(x, batch, g);
    return g;
  }

  ParamVector hessian_vector(std::span<const double> x, std::span<const double> v,
                             const MiniBatch& batch) const {
    ParamVector out(dim());
    hvp(x, v, batch, out);
    return out;
  }

  MiniBatch full() const { return full_batch(num_samples()); }
};

}  // namespace lmopt
