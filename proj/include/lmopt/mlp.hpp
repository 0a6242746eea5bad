#pragma once

#include <memory>
#include <string_view>

#include "lmopt/dataset.hpp"
#include "lmopt/problem.hpp"

namespace lmopt {

enum class Activation { Tanh, Sigmoid };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Fully connected d -> h1 -> h2 -> 1 network producing one logit.
///
/// Flattened parameter layout: W1 (h1 x d, row-major), b1, W2 (h2 x h1), b2,
/// w3 (h2), b3.
struct MlpArchitecture {
  std::size_t inputs = 0;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 16;
  Activation activation = Activation::Tanh;

  std::size_t num_params() const {
    return hidden1 * inputs + hidden1 + hidden2 * hidden1 + hidden2 + hidden2 + 1;
  }
  std::size_t off_w1() const { return 0; }
  std::size_t off_b1() const { return hidden1 * inputs; }
  std::size_t off_w2() const { return off_b1() + hidden1; }
  std::size_t off_b2() const { return off_w2() + hidden2 * hidden1; }
  std::size_t off_w3() const { return off_b2() + hidden2; }
  std::size_t off_b3() const { return off_w3() + hidden2; }

  void validate() const;
  bool operator==(const MlpArchitecture&) const = default;
};

/// Mean BCE-with-logits over the batch plus a Welsch term on every parameter.
/// Gradients use reverse mode; Hessian-vector products use the R-operator
/// (forward tangent pushed through the forward and backward passes).
class MlpWelsch final : public Problem {
 public:
  MlpWelsch(std::shared_ptr<const Dataset> data, MlpArchitecture arch, double lambda,
            ExecPolicy policy = ExecPolicy::Parallel);

  std::size_t dim() const override { return arch_.num_params(); }
  std::size_t num_samples() const override { return data_->n_samples; }

  /// Forward pass only; equals the value returned by value_grad.
  double value(std::span<const double> x, const MiniBatch& batch) const override;
  double value_grad(std::span<const double> x, const MiniBatch& batch,
                    std::span<double> grad) const override;
  void hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
           std::span<double> out) const override;

  /// Network output before the loss, for a single input row.
  double logit(std::span<const double> x, std::span<const double> input) const;

  const MlpArchitecture& arch() const { return arch_; }
  double lambda() const { return lambda_; }

 private:
  void check(std::span<const double> x, const MiniBatch& batch) const;

  std::shared_ptr<const Dataset> data_;
  MlpArchitecture arch_;
  double lambda_;
  ExecPolicy policy_;
};

}  // namespace lmopt
