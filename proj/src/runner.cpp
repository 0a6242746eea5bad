#include "lmopt/runner.hpp"

#include <chrono>
#include <exception>
#include <limits>

namespace lmopt {

Trace run(const Problem& problem, const RunConfig& config, const IterationObserver& observer) {
  const RunConfig cfg = resolve_config(config, problem.dim());
  cfg.validate();

  const std::size_t n = problem.num_samples();
  const std::size_t d = problem.dim();
  const std::size_t K = cfg.iters;
  Rng batch_rng = make_stream(cfg.seed, StreamTag::Batch);
  Rng init_rng = make_stream(cfg.seed, StreamTag::Init);

  ParamVector x = standard_normal_vector(init_rng, d);
  ParamVector x_prev(d), step(d), grad_full(d), err(d);

  Trace trace;
  trace.config = cfg;
  const MiniBatch full = problem.full();
  const auto t0 = std::chrono::steady_clock::now();
  double runmin_loss = std::numeric_limits<double>::infinity();
  double runmin_grad = std::numeric_limits<double>::infinity();

  MomentumState state = make_momentum_state(ParamVector(d, 0.0), make_stream(cfg.seed, StreamTag::Interpolation));
  state.pinned_b = cfg.som_pinned_b;
  MomentumEngine engine(cfg.variant, MomentumOptions{cfg.mars_anchor, cfg.mutate_beta});

  auto log_row = [&](std::size_t k, double step_norm) {
    TraceRow r;
    r.k = k;
    r.loss = problem.value_grad(x, full, grad_full);
    if (!std::isfinite(r.loss) || !all_finite(grad_full)) throw DivergenceError(k, "non-finite full-batch metrics");
    r.grad_l2 = norm2(grad_full);
    r.grad_dual = dual_norm(cfg.norm, grad_full);
    for (std::size_t i = 0; i < d; ++i) err[i] = grad_full[i] - state.m[i];
    r.mom_err = dual_norm(cfg.norm, err);
    r.step_norm = step_norm;
    runmin_loss = std::min(runmin_loss, r.loss);
    runmin_grad = std::min(runmin_grad, r.grad_dual);
    r.runmin_loss = runmin_loss;
    r.runmin_grad = runmin_grad;
    if (cfg.record_wall_clock)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    trace.rows.push_back(r);
  };

  try {
    if (cfg.m0 == MomentumInit::Gradient) {
      const MiniBatch b0 = cfg.full_batch ? full : sample_batch(batch_rng, n, cfg.batch_size);
      try {
        problem.value_grad(x, b0, state.m);
      } catch (const NonFiniteError& e) {
        throw DivergenceError(0, e.what());
      }
      if (!all_finite(state.m)) throw DivergenceError(0, "non-finite initial momentum");
    }

    for (std::size_t k = 0; k < K; ++k) {
      const StepCoeffs c = coeffs_at(cfg.schedule, k);
      lmo_into(cfg.norm, state.m, c.eta, step);
      if (k % cfg.eval_every == 0) log_row(k, norm(cfg.norm, step));

      x_prev = x;
      for (std::size_t i = 0; i < d; ++i) x[i] += step[i];
      if (!all_finite(x)) throw DivergenceError(k, "non-finite iterate");

      const MiniBatch batch = cfg.full_batch ? full : sample_batch(batch_rng, n, cfg.batch_size);
      engine.update(problem, state, c, batch, x, x_prev);
      if (observer) observer(k, x, state.m);
    }
    log_row(K, 0.0);
  } catch (const DivergenceError& e) {
    trace.diverged_at = e.iteration();
    trace.divergence_message = e.what();
  }
  trace.final_x = std::move(x);
  return trace;
}

Trace run(const RunConfig& config) {
  config.validate();
  auto data = load_dataset(config.problem);
  auto problem = make_problem(config.problem, std::move(data));
  return run(*problem, config);
}

std::vector<Trace> run_many(const Problem& problem, const std::vector<RunConfig>& configs) {
  std::vector<Trace> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  const long n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run(problem, configs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace lmopt
