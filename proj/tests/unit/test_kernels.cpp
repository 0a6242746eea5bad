#include <doctest.h>

#include <omp.h>

#include "helpers.hpp"
#include "lmopt/kernels.hpp"
#include "lmopt/logreg.hpp"
#include "lmopt/mlp.hpp"

using namespace lmopt;
using testing::Gen;

namespace {

struct Sums {
  double value;
  ParamVector grad, hvp;
};

Sums logistic(bool par, const Dataset& d, const MiniBatch& b, const ParamVector& x, const ParamVector& v) {
  Sums s{0.0, ParamVector(x.size(), 0.0), ParamVector(x.size(), 0.0)};
  if (par) {
    s.value = kernels::parallel::logistic_value_grad(d, b.indices, x, s.grad);
    kernels::parallel::logistic_hvp(d, b.indices, x, v, s.hvp);
  } else {
    s.value = kernels::serial::logistic_value_grad(d, b.indices, x, s.grad);
    kernels::serial::logistic_hvp(d, b.indices, x, v, s.hvp);
  }
  return s;
}

Sums mlp(bool par, const MlpArchitecture& a, const Dataset& d, const MiniBatch& b, const ParamVector& x,
         const ParamVector& v) {
  Sums s{0.0, ParamVector(x.size(), 0.0), ParamVector(x.size(), 0.0)};
  if (par) {
    s.value = kernels::parallel::mlp_value_grad(a, d, b.indices, x, s.grad);
    kernels::parallel::mlp_hvp(a, d, b.indices, x, v, s.hvp);
  } else {
    s.value = kernels::serial::mlp_value_grad(a, d, b.indices, x, s.grad);
    kernels::serial::mlp_hvp(a, d, b.indices, x, v, s.hvp);
  }
  return s;
}

bool bitwise(const Sums& a, const Sums& b) { return a.value == b.value && a.grad == b.grad && a.hvp == b.hvp; }

void close(const Sums& a, const Sums& b) {
  CHECK(std::abs(a.value - b.value) <= 1e-12 * std::abs(b.value));
  CHECK(rel_error(a.grad, b.grad) < 1e-12);
  CHECK(rel_error(a.hvp, b.hvp) < 1e-12);
}

}  // namespace

TEST_CASE("scalar helpers are stable") {
  CHECK(kernels::softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(kernels::softplus(1000.0) == 1000.0);
  CHECK(kernels::softplus(-1000.0) >= 0.0);
  CHECK(kernels::softplus(-1000.0) < 1e-300);
  CHECK(kernels::sigmoid(0.0) == 0.5);
  CHECK(kernels::sigmoid(-1000.0) == 0.0);
  CHECK(kernels::sigmoid(1000.0) == 1.0);
}

TEST_CASE("serial and parallel kernels agree") {
  const Dataset data = synthesize_dataset(1000, 20, 4);
  const MlpArchitecture arch{20, 8, 6, Activation::Tanh};
  Gen g(41);
  const ParamVector xl = g.vec(20), vl = g.vec(20), xm = g.vec(arch.num_params()), vm = g.vec(arch.num_params());

  for (std::size_t bsz : {1u, 17u, 64u, 65u, 200u, 1000u}) {
    CAPTURE(bsz);
    const MiniBatch b = bsz == 1000 ? full_batch(1000) : g.batch(1000, bsz);
    const Sums ls = logistic(false, data, b, xl, vl), ms = mlp(false, arch, data, b, xm, vm);
    Sums lp_ref{}, mp_ref{};
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      const Sums lp = logistic(true, data, b, xl, vl), mp = mlp(true, arch, data, b, xm, vm);
      if (bsz <= kernels::kBlockSize) {
        CHECK(bitwise(lp, ls));
        CHECK(bitwise(mp, ms));
      } else {
        close(lp, ls);
        close(mp, ms);
      }
      // Thread count never changes the blocked result.
      if (threads == 1) {
        lp_ref = lp;
        mp_ref = mp;
      } else {
        CHECK(bitwise(lp, lp_ref));
        CHECK(bitwise(mp, mp_ref));
      }
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("problem classes agree across execution policies") {
  auto data = testing::small_data(300, 10, 5);
  const LogRegWelsch ls(data, 0.01, ExecPolicy::Serial), lp(data, 0.01, ExecPolicy::Parallel);
  const MlpArchitecture arch{10, 6, 4, Activation::Sigmoid};
  const MlpWelsch ms(data, arch, 0.01, ExecPolicy::Serial), mp(data, arch, 0.01, ExecPolicy::Parallel);
  Gen g(42);
  const ParamVector x = g.vec(10), v = g.vec(10), w = g.vec(arch.num_params()), u = g.vec(arch.num_params());
  const MiniBatch full = ls.full();
  CHECK(rel_error(lp.gradient(x, full), ls.gradient(x, full)) < 1e-12);
  CHECK(rel_error(lp.hessian_vector(x, v, full), ls.hessian_vector(x, v, full)) < 1e-12);
  CHECK(rel_error(mp.gradient(w, full), ms.gradient(w, full)) < 1e-12);
  CHECK(rel_error(mp.hessian_vector(w, u, full), ms.hessian_vector(w, u, full)) < 1e-12);
  const MiniBatch small = g.batch(300, 8);
  CHECK(lp.gradient(x, small) == ls.gradient(x, small));
  CHECK(mp.hessian_vector(w, u, small) == ms.hessian_vector(w, u, small));
}

TEST_CASE("forward-only value matches value_grad bitwise") {
  auto data = testing::small_data(300, 10, 6);
  const MlpArchitecture arch{10, 6, 4, Activation::Tanh};
  Gen g(43);
  const ParamVector x = g.vec(10), w = g.vec(arch.num_params());
  for (ExecPolicy policy : {ExecPolicy::Serial, ExecPolicy::Parallel}) {
    const LogRegWelsch lr(data, 0.01, policy);
    const MlpWelsch mlp(data, arch, 0.01, policy);
    for (const MiniBatch& b : {lr.full(), g.batch(300, 7), g.batch(300, 150)}) {
      ParamVector gl(lr.dim()), gm(mlp.dim());
      CHECK(lr.value(x, b) == lr.value_grad(x, b, gl));
      CHECK(mlp.value(w, b) == mlp.value_grad(w, b, gm));
    }
  }
}
