#pragma once

#include <memory>

#include "lmopt/dataset.hpp"
#include "lmopt/problem.hpp"

namespace lmopt {

/// Mean logistic loss (1/B) sum log(1 + exp(-y_i a_i^T x)) plus a Welsch term.
class LogRegWelsch final : public Problem {
 public:
  LogRegWelsch(std::shared_ptr<const Dataset> data, double lambda,
               ExecPolicy policy = ExecPolicy::Parallel);

  std::size_t dim() const override { return data_->n_features; }
  std::size_t num_samples() const override { return data_->n_samples; }

  /// Forward pass only; equals the value returned by value_grad.
  double value(std::span<const double> x, const MiniBatch& batch) const override;
  double value_grad(std::span<const double> x, const MiniBatch& batch,
                    std::span<double> grad) const override;
  void hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
           std::span<double> out) const override;

  double lambda() const { return lambda_; }
  const Dataset& data() const { return *data_; }

 private:
  void check(std::span<const double> x, const MiniBatch& batch) const;

  std::shared_ptr<const Dataset> data_;
  double lambda_;
  ExecPolicy policy_;
};

}  // namespace lmopt
