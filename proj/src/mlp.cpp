#include "lmopt/mlp.hpp"

#include "lmopt/kernels.hpp"
#include "lmopt/welsch.hpp"

namespace lmopt {

std::string_view to_string(Activation a) { return a == Activation::Tanh ? "tanh" : "sigmoid"; }

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "' (expected tanh|sigmoid)");
}

void MlpArchitecture::validate() const {
  if (inputs == 0 || hidden1 == 0 || hidden2 == 0) throw ConfigError("mlp: every layer width must be >= 1");
}

MlpWelsch::MlpWelsch(std::shared_ptr<const Dataset> data, MlpArchitecture arch, double lambda,
                     ExecPolicy policy)
    : data_(std::move(data)), arch_(arch), lambda_(lambda), policy_(policy) {
  if (!data_) throw ConfigError("mlp: null dataset");
  data_->validate();
  if (arch_.inputs == 0) arch_.inputs = data_->n_features;
  arch_.validate();
  if (arch_.inputs != data_->n_features)
    throw ConfigError("mlp: input width does not match dataset features");
  if (!(lambda_ >= 0.0)) throw ConfigError("mlp: lambda must be >= 0");
}

void MlpWelsch::check(std::span<const double> x, const MiniBatch& batch) const {
  require_same_size(x.size(), dim(), "mlp x");
  if (batch.indices.empty()) throw ConfigError("mlp: empty batch");
  for (std::size_t i : batch.indices)
    if (i >= data_->n_samples) throw ConfigError("mlp: batch index out of range");
  require_finite(x, "mlp x");
}

double MlpWelsch::value(std::span<const double> x, const MiniBatch& batch) const {
  check(x, batch);
  const double loss = policy_ == ExecPolicy::Serial ? kernels::serial::mlp_value(arch_, *data_, batch.indices, x)
                                                    : kernels::parallel::mlp_value(arch_, *data_, batch.indices, x);
  return loss * (1.0 / static_cast<double>(batch.size())) + welsch_value(x, lambda_);
}

double MlpWelsch::value_grad(std::span<const double> x, const MiniBatch& batch,
                             std::span<double> grad) const {
  check(x, batch);
  require_same_size(grad.size(), dim(), "mlp grad");
  const double loss =
      policy_ == ExecPolicy::Serial
          ? kernels::serial::mlp_value_grad(arch_, *data_, batch.indices, x, grad)
          : kernels::parallel::mlp_value_grad(arch_, *data_, batch.indices, x, grad);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad) g *= inv_b;
  welsch_add_grad(x, lambda_, grad);
  return loss * inv_b + welsch_value(x, lambda_);
}

void MlpWelsch::hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
                    std::span<double> out) const {
  check(x, batch);
  require_same_size(v.size(), dim(), "mlp v");
  require_same_size(out.size(), dim(), "mlp hvp out");
  require_finite(v, "mlp v");
  if (policy_ == ExecPolicy::Serial)
    kernels::serial::mlp_hvp(arch_, *data_, batch.indices, x, v, out);
  else
    kernels::parallel::mlp_hvp(arch_, *data_, batch.indices, x, v, out);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (double& o : out) o *= inv_b;
  welsch_add_hvp(x, v, lambda_, out);
}

double MlpWelsch::logit(std::span<const double> x, std::span<const double> input) const {
  require_same_size(x.size(), dim(), "mlp x");
  require_same_size(input.size(), arch_.inputs, "mlp input");
  return kernels::mlp_logit(arch_, x, input);
}

}  // namespace lmopt
