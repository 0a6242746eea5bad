#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lmopt/config.hpp"
#include "lmopt/trace.hpp"

namespace lmopt {

/// Called after iteration k with x_{k+1} and m_{k+1}.
using IterationObserver =
    std::function<void(std::size_t k, std::span<const double> x, std::span<const double> m)>;

/// One optimizer run:
///   x_0 ~ N(0,1)^d, m_0 = grad f_{xi_0}(x_0) (or 0),
///   for k = 0..iters-1: x_{k+1} = x_k + lmo(m_k); draw xi_{k+1}; update m.
/// Rows are logged at k = 0, E, 2E, ... and at k = iters, with full-batch metrics.
/// Divergence does not throw: the partial trace is returned with diverged_at set.
/// Config errors throw ConfigError before the first iteration.
Trace run(const Problem& problem, const RunConfig& config, const IterationObserver& observer = {});

/// Loads the dataset named by config.problem and runs.
Trace run(const RunConfig& config);

/// Independent runs on a shared problem, distributed over OpenMP threads.
std::vector<Trace> run_many(const Problem& problem, const std::vector<RunConfig>& configs);

}  // namespace lmopt
