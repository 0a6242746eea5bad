#include <algorithm>
#include <cmath>

#include "blocked.hpp"
#include "lmopt/kernels.hpp"

namespace lmopt::kernels {

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

double logistic_accumulate(const Dataset& data, std::span<const std::size_t> idx,
                           std::span<const double> x, std::span<double> acc) {
  const std::size_t d = data.n_features;
  double loss = 0.0;
  for (std::size_t i : idx) {
    const auto a = data.row(i);
    const double y = data.labels[i];
    const double z = y * dot(a, x);
    loss += softplus(-z);
    const double c = -y * sigmoid(-z);
    for (std::size_t j = 0; j < d; ++j) acc[j] += c * a[j];
  }
  return loss;
}

double logistic_loss(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x) {
  double loss = 0.0;
  for (std::size_t i : idx) loss += softplus(-data.labels[i] * dot(data.row(i), x));
  return loss;
}

double logistic_hvp_accumulate(const Dataset& data, std::span<const std::size_t> idx,
                               std::span<const double> x, std::span<const double> v,
                               std::span<double> acc) {
  const std::size_t d = data.n_features;
  for (std::size_t i : idx) {
    const auto a = data.row(i);
    const double s = sigmoid(-data.labels[i] * dot(a, x));
    const double c = s * (1.0 - s) * dot(a, v);
    for (std::size_t j = 0; j < d; ++j) acc[j] += c * a[j];
  }
  return 0.0;
}

}  // namespace

namespace serial {

double logistic_value(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x) {
  return logistic_loss(data, idx, x);
}

double logistic_value_grad(const Dataset& data, std::span<const std::size_t> idx,
                           std::span<const double> x, std::span<double> grad_sum) {
  std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
  return logistic_accumulate(data, idx, x, grad_sum);
}

void logistic_hvp(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x,
                  std::span<const double> v, std::span<double> out_sum) {
  std::fill(out_sum.begin(), out_sum.end(), 0.0);
  logistic_hvp_accumulate(data, idx, x, v, out_sum);
}

}  // namespace serial

namespace parallel {

double logistic_value(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x) {
  return detail::blocked_reduce(idx, 0, {}, [&](std::span<const std::size_t> slice, std::span<double>) {
    return logistic_loss(data, slice, x);
  });
}

double logistic_value_grad(const Dataset& data, std::span<const std::size_t> idx,
                           std::span<const double> x, std::span<double> grad_sum) {
  return detail::blocked_reduce(idx, data.n_features, grad_sum,
                                [&](std::span<const std::size_t> slice, std::span<double> acc) {
                                  return logistic_accumulate(data, slice, x, acc);
                                });
}

void logistic_hvp(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x,
                  std::span<const double> v, std::span<double> out_sum) {
  detail::blocked_reduce(idx, data.n_features, out_sum,
                         [&](std::span<const std::size_t> slice, std::span<double> acc) {
                           return logistic_hvp_accumulate(data, slice, x, v, acc);
                         });
}

}  // namespace parallel

}  // namespace lmopt::kernels
