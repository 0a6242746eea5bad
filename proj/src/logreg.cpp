#include "lmopt/logreg.hpp"

#include "lmopt/kernels.hpp"
#include "lmopt/welsch.hpp"

namespace lmopt {

LogRegWelsch::LogRegWelsch(std::shared_ptr<const Dataset> data, double lambda, ExecPolicy policy)
    : data_(std::move(data)), lambda_(lambda), policy_(policy) {
  if (!data_) throw ConfigError("logreg: null dataset");
  data_->validate();
  if (!(lambda_ >= 0.0)) throw ConfigError("logreg: lambda must be >= 0");
}

void LogRegWelsch::check(std::span<const double> x, const MiniBatch& batch) const {
  require_same_size(x.size(), dim(), "logreg x");
  if (batch.indices.empty()) throw ConfigError("logreg: empty batch");
  for (std::size_t i : batch.indices)
    if (i >= data_->n_samples) throw ConfigError("logreg: batch index out of range");
  require_finite(x, "logreg x");
}

double LogRegWelsch::value(std::span<const double> x, const MiniBatch& batch) const {
  check(x, batch);
  const double loss = policy_ == ExecPolicy::Serial ? kernels::serial::logistic_value(*data_, batch.indices, x)
                                                    : kernels::parallel::logistic_value(*data_, batch.indices, x);
  return loss * (1.0 / static_cast<double>(batch.size())) + welsch_value(x, lambda_);
}

double LogRegWelsch::value_grad(std::span<const double> x, const MiniBatch& batch,
                                std::span<double> grad) const {
  check(x, batch);
  require_same_size(grad.size(), dim(), "logreg grad");
  const double loss = policy_ == ExecPolicy::Serial
                          ? kernels::serial::logistic_value_grad(*data_, batch.indices, x, grad)
                          : kernels::parallel::logistic_value_grad(*data_, batch.indices, x, grad);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad) g *= inv_b;
  welsch_add_grad(x, lambda_, grad);
  return loss * inv_b + welsch_value(x, lambda_);
}

void LogRegWelsch::hvp(std::span<const double> x, std::span<const double> v, const MiniBatch& batch,
                       std::span<double> out) const {
  check(x, batch);
  require_same_size(v.size(), dim(), "logreg v");
  require_same_size(out.size(), dim(), "logreg hvp out");
  require_finite(v, "logreg v");
  if (policy_ == ExecPolicy::Serial)
    kernels::serial::logistic_hvp(*data_, batch.indices, x, v, out);
  else
    kernels::parallel::logistic_hvp(*data_, batch.indices, x, v, out);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (double& o : out) o *= inv_b;
  welsch_add_hvp(x, v, lambda_, out);
}

}  // namespace lmopt
