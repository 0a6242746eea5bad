// Serial reference kernels vs the OpenMP block-parallel kernels on the
// full synthetic dataset. Set OMP_NUM_THREADS to vary the parallel side.

#include <benchmark/benchmark.h>

#include <memory>

#include "lmopt/dataset.hpp"
#include "lmopt/kernels.hpp"
#include "lmopt/mlp.hpp"
#include "lmopt/sampling.hpp"

namespace {

using namespace lmopt;

const Dataset& data() {
  static const Dataset d = synthesize_dataset(1000, 60, 0);
  return d;
}

ParamVector random_params(std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed, StreamTag::Init);
  ParamVector x = standard_normal_vector(rng, n);
  for (double& e : x) e *= 0.3;
  return x;
}

const MlpArchitecture kArch{60, 32, 16, Activation::Tanh};

MiniBatch batch_of(std::size_t b) {
  if (b >= data().n_samples) return full_batch(data().n_samples);
  Rng rng = make_stream(7, StreamTag::Batch);
  return sample_batch(rng, data().n_samples, b);
}

template <bool Parallel>
void BM_LogisticValueGrad(benchmark::State& state) {
  const MiniBatch b = batch_of(static_cast<std::size_t>(state.range(0)));
  const ParamVector x = random_params(60, 1);
  ParamVector g(60);
  for (auto _ : state) {
    const double v = Parallel ? kernels::parallel::logistic_value_grad(data(), b.indices, x, g)
                              : kernels::serial::logistic_value_grad(data(), b.indices, x, g);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LogisticHvp(benchmark::State& state) {
  const MiniBatch b = batch_of(static_cast<std::size_t>(state.range(0)));
  const ParamVector x = random_params(60, 1), v = random_params(60, 2);
  ParamVector out(60);
  for (auto _ : state) {
    if (Parallel)
      kernels::parallel::logistic_hvp(data(), b.indices, x, v, out);
    else
      kernels::serial::logistic_hvp(data(), b.indices, x, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_MlpValueGrad(benchmark::State& state) {
  const MiniBatch b = batch_of(static_cast<std::size_t>(state.range(0)));
  const ParamVector x = random_params(kArch.num_params(), 1);
  ParamVector g(x.size());
  for (auto _ : state) {
    const double v = Parallel ? kernels::parallel::mlp_value_grad(kArch, data(), b.indices, x, g)
                              : kernels::serial::mlp_value_grad(kArch, data(), b.indices, x, g);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_MlpHvp(benchmark::State& state) {
  const MiniBatch b = batch_of(static_cast<std::size_t>(state.range(0)));
  const ParamVector x = random_params(kArch.num_params(), 1), v = random_params(kArch.num_params(), 2);
  ParamVector out(x.size());
  for (auto _ : state) {
    if (Parallel)
      kernels::parallel::mlp_hvp(kArch, data(), b.indices, x, v, out);
    else
      kernels::serial::mlp_hvp(kArch, data(), b.indices, x, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

#define LMOPT_BENCH_PAIR(fn)                                               \
  BENCHMARK(fn<false>)->Name(#fn "/serial")->Arg(32)->Arg(256)->Arg(1000); \
  BENCHMARK(fn<true>)->Name(#fn "/parallel")->Arg(32)->Arg(256)->Arg(1000)

LMOPT_BENCH_PAIR(BM_LogisticValueGrad);
LMOPT_BENCH_PAIR(BM_LogisticHvp);
LMOPT_BENCH_PAIR(BM_MlpValueGrad);
LMOPT_BENCH_PAIR(BM_MlpHvp);

}  // namespace

BENCHMARK_MAIN();
