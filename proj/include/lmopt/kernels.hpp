#pragma once

// Batch-summed per-sample kernels. Every kernel returns/writes SUMS over the
// given sample indices (not means); callers divide by the batch size.
//
// serial::*   straight per-sample loops, kept as the reference path.
// parallel::* OpenMP over fixed blocks of kBlockSize samples; block partials are
//             reduced in block order, so the result is independent of the
//             thread count. A batch that fits one block is bitwise identical to
//             the serial result.

#include <cstddef>
#include <span>

#include "lmopt/dataset.hpp"
#include "lmopt/mlp.hpp"

namespace lmopt::kernels {

inline constexpr std::size_t kBlockSize = 64;

double softplus(double t);
double sigmoid(double t);

/// Network logit for one input row.
double mlp_logit(const MlpArchitecture& arch, std::span<const double> x, std::span<const double> input);

namespace serial {

double logistic_value(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x);
double logistic_value_grad(const Dataset& data, std::span<const std::size_t> idx,
                           std::span<const double> x, std::span<double> grad_sum);
void logistic_hvp(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x,
                  std::span<const double> v, std::span<double> out_sum);

double mlp_value(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
                 std::span<const double> x);
double mlp_value_grad(const MlpArchitecture& arch, const Dataset& data,
                      std::span<const std::size_t> idx, std::span<const double> x,
                      std::span<double> grad_sum);
void mlp_hvp(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
             std::span<const double> x, std::span<const double> v, std::span<double> out_sum);

}  // namespace serial

namespace parallel {

double logistic_value(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x);
double logistic_value_grad(const Dataset& data, std::span<const std::size_t> idx,
                           std::span<const double> x, std::span<double> grad_sum);
void logistic_hvp(const Dataset& data, std::span<const std::size_t> idx, std::span<const double> x,
                  std::span<const double> v, std::span<double> out_sum);

double mlp_value(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
                 std::span<const double> x);
double mlp_value_grad(const MlpArchitecture& arch, const Dataset& data,
                      std::span<const std::size_t> idx, std::span<const double> x,
                      std::span<double> grad_sum);
void mlp_hvp(const MlpArchitecture& arch, const Dataset& data, std::span<const std::size_t> idx,
             std::span<const double> x, std::span<const double> v, std::span<double> out_sum);

}  // namespace parallel

}  // namespace lmopt::kernels
