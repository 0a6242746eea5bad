#include "lmopt/welsch.hpp"

namespace lmopt {

double welsch_value(std::span<const double> x, double lambda) {
  double s = 0.0;
  for (double xi : x) {
    const double q = xi * xi;
    s += q / (1.0 + q);
  }
  return lambda * s;
}

void welsch_add_grad(std::span<const double> x, double lambda, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double den = 1.0 + x[i] * x[i];
    out[i] += lambda * 2.0 * x[i] / (den * den);
  }
}

void welsch_add_hvp(std::span<const double> x, std::span<const double> v, double lambda,
                    std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double q = x[i] * x[i];
    const double den = 1.0 + q;
    out[i] += lambda * (2.0 - 6.0 * q) / (den * den * den) * v[i];
  }
}

WelschEval welsch_value_grad_hvp(std::span<const double> x, std::span<const double> v, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("welsch: lambda must be >= 0");
  require_same_size(x.size(), v.size(), "welsch");
  require_finite(x, "welsch x");
  require_finite(v, "welsch v");
  WelschEval e;
  e.value = welsch_value(x, lambda);
  e.grad.assign(x.size(), 0.0);
  e.hvp.assign(x.size(), 0.0);
  welsch_add_grad(x, lambda, e.grad);
  welsch_add_hvp(x, v, lambda, e.hvp);
  return e;
}

}  // namespace lmopt
