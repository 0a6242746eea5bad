#pragma once

// Independent checks of the optimizer building blocks: central finite
// differences, sampled LMO optimality, bitwise variant-equivalence runs, and a
// descriptive (L0, L1) smoothness probe.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmopt/norms.hpp"
#include "lmopt/problem.hpp"
#include "lmopt/sampling.hpp"

namespace lmopt {

/// Central differences. Per-coordinate step: rel_step * (1 + |x_i|).
struct FdSpec {
  double rel_step = 1e-5;
};

ParamVector fd_gradient(const Problem& problem, std::span<const double> x, const MiniBatch& batch,
                        FdSpec fd = {});
/// d f / d x_i only.
double fd_partial(const Problem& problem, std::span<const double> x, const MiniBatch& batch,
                  std::size_t i, FdSpec fd = {});
/// (grad f(x + eps v) - grad f(x - eps v)) / (2 eps), eps = rel_step (1 + ||x||) / (1 + ||v||).
ParamVector fd_hvp(const Problem& problem, std::span<const double> x, std::span<const double> v,
                   const MiniBatch& batch, FdSpec fd = {});

struct LmoCheckResult {
  bool ok = false;
  double identity_rel_err = 0.0;  // |<m, s> + eta ||m||_*| / (eta ||m||_*)
  double norm_ratio = 0.0;        // ||s|| / eta
  double worst_gap = 0.0;         // max over samples of <m, s> - <m, x>
};

/// Samples feasible points (half uniform in the ball, half on its boundary) and
/// checks none beats lmo(m) by more than 1e-10, plus
/// the identity <m, lmo(m)> = -eta ||m||_* and feasibility.
LmoCheckResult lmo_bruteforce_check(NormSpec spec, std::span<const double> m, double eta,
                                    std::size_t samples, Rng& rng);

struct ProbePoint {
  double grad_norm = 0.0;  // max(||grad f(x)||_*, ||grad f(y)||_*)
  double curvature = 0.0;  // ||grad f(x) - grad f(y)||_* / ||x - y||
};

/// Full-batch probe over consecutive trajectory pairs; duplicates are skipped.
std::vector<ProbePoint> smoothness_probe(const Problem& problem, NormSpec norm,
                                         std::span<const ParamVector> trajectory);

struct AffineFit {
  double L0 = 0.0;
  double L1 = 0.0;
};

/// Least-squares fit curvature ~ L0 + L1 * grad_norm. Descriptive only.
AffineFit fit_affine(std::span<const ProbePoint> points);

enum class CheckStatus { Pass, Fail, ExpectedDifferent };
std::string_view to_string(CheckStatus s);

struct EquivalenceCheck {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::optional<std::size_t> first_diverging_k;
  double max_abs_diff = 0.0;
  std::string note;
};

struct EquivalenceReport {
  std::vector<EquivalenceCheck> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

struct EquivalenceOptions {
  std::size_t iters = 200;
  std::uint64_t seed = 0;
  bool mutate_beta = false;  // corrupts the engine's beta wiring; every beta check must then fail
};

/// Bitwise comparisons of (x, m) after every iteration on a small synthetic logistic problem (d=5, N=20):
/// MARS(beta=1-alpha) vs an independent STORM loop, MARS(anchor=old) vs STORM
/// (expected to differ), SOM-V1 with u=1 vs SOM-V2, beta=0 collapse to Polyak,
/// and alpha=1, beta=0 vs a memoryless normalized/sign-step loop.
EquivalenceReport equivalence_suite(const EquivalenceOptions& options = {});

struct RunConfig;

/// (x_{k+1}, m_{k+1}) after iteration k.
struct IterateState {
  ParamVector x;
  ParamVector m;
};

/// A run written without the momentum engine:
/// m <- (1-a)(m + (g(x_{k+1}) - g(x_k))) + a g(x_{k+1}) on a shared sample.
std::vector<IterateState> reference_storm_trajectory(const Problem& problem, const RunConfig& config);
/// x_{k+1} = x_k + lmo(g_{xi_k}(x_k)): normalized SGD (l2) or sign SGD (linf).
std::vector<IterateState> reference_memoryless_trajectory(const Problem& problem, const RunConfig& config);

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t derivative_points = 50;
  std::size_t lmo_triples = 1000;
  std::size_t lmo_samples = 1000;
};

/// Derivative checks, LMO checks and the equivalence suite; JSON report with
/// a top-level "passed" flag.
nlohmann::json run_verify_suite(const VerifyOptions& options = {});

}  // namespace lmopt
