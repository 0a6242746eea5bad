#pragma once

// Welsch regularizer R(x) = lambda * sum_i x_i^2 / (1 + x_i^2). Bounded,
// nonconvex, with a diagonal Hessian.

#include <span>

#include "lmopt/vec.hpp"

namespace lmopt {

struct WelschEval {
  double value = 0.0;
  ParamVector grad;
  ParamVector hvp;
};

WelschEval welsch_value_grad_hvp(std::span<const double> x, std::span<const double> v, double lambda);

double welsch_value(std::span<const double> x, double lambda);
/// out += grad R(x)
void welsch_add_grad(std::span<const double> x, double lambda, std::span<double> out);
/// out += grad^2 R(x) v
void welsch_add_hvp(std::span<const double> x, std::span<const double> v, double lambda,
                    std::span<double> out);

}  // namespace lmopt
