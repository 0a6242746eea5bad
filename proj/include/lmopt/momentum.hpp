#pragma once

// Momentum engines for x_{k+1} = x_k + lmo(m_k). Each update consumes oracle
// calls on ONE mini-batch (the sample xi_{k+1}) and writes m_{k+1}.
//
//   Polyak  m <- (1-a) m + a g(x_{k+1})
//   IGT     m <- (1-a) m + a g(y),  y = x_{k+1} + ((1-a)/a)(x_{k+1} - x_k)
//   MARS    m <- (1-a)(m + b/(1-a) [g(x_{k+1}) - g(x_k)]) + a g(anchor)
//   SOM     m <- (1-a)(m + b/(1-a) H(xhat)(x_{k+1} - x_k)) + a g(x_{k+1})
//
// with xhat = x_{k+1} (SOM-V2) or xhat = u x_{k+1} + (1-u) x_k, u ~ U(0,1) (SOM-V1).
// b = 1-a makes the b/(1-a) factor exactly 1 in floating point, so MARS with
// b = 1-a reproduces STORM bit for bit and b = 0 reproduces Polyak bit for bit.

#include <optional>
#include <span>
#include <string_view>

#include "lmopt/norms.hpp"
#include "lmopt/problem.hpp"
#include "lmopt/sampling.hpp"

namespace lmopt {

enum class Variant { Polyak, IGT, MARS, SOMv1, SOMv2 };
enum class SomVariant { V1, V2 };
/// Where MARS evaluates its alpha-weighted gradient: x_{k+1} (New) or x_k (Old).
enum class MarsAnchor { New, Old };

std::string_view to_string(Variant v);
std::string_view to_string(MarsAnchor a);
Variant parse_variant(std::string_view name);
MarsAnchor parse_mars_anchor(std::string_view name);

bool uses_beta(Variant v);

struct StepCoeffs {
  double alpha = 1.0;
  double beta = 0.0;
  double eta = 1.0;
  std::size_t k = 0;

  void validate() const;
  bool operator==(const StepCoeffs&) const = default;
};

struct MomentumState {
  ParamVector m;
  Rng interp_rng;                  // SOM-V1 interpolation draws
  std::optional<double> pinned_b;  // test hook: fixes the SOM-V1 interpolation weight
  double last_b = 1.0;
};

MomentumState make_momentum_state(ParamVector m0, Rng interp_rng);

void polyak_update(MomentumState& state, const StepCoeffs& c, std::span<const double> grad_new);

ParamVector igt_extrapolate(std::span<const double> x_new, std::span<const double> x_prev, double alpha);

/// grad_new and grad_old must be evaluated on the same sample.
void mars_update(MomentumState& state, const StepCoeffs& c, std::span<const double> grad_new,
                 std::span<const double> grad_old, MarsAnchor anchor = MarsAnchor::New);

/// Draws the interpolation weight (V1), then evaluates one HVP and one gradient
/// on `batch`.
void som_update(MomentumState& state, const StepCoeffs& c, SomVariant variant, const Problem& problem,
                const MiniBatch& batch, std::span<const double> x_new, std::span<const double> x_prev);

/// dual_norm(grad f(x) - m) with the full-batch gradient.
double momentum_error_diagnostic(const Problem& problem, NormSpec norm, std::span<const double> m,
                                 std::span<const double> x);

struct MomentumOptions {
  MarsAnchor mars_anchor = MarsAnchor::New;
  bool mutate_beta = false;  // test hook: feeds 1-beta instead of beta
};

/// Dispatches one momentum update for `variant` on the already sampled batch.
/// Converts non-finite oracle output or momentum into DivergenceError(c.k).
class MomentumEngine {
 public:
  MomentumEngine(Variant variant, MomentumOptions options = {}) : variant_(variant), options_(options) {}

  void update(const Problem& problem, MomentumState& state, const StepCoeffs& c,
              const MiniBatch& batch, std::span<const double> x_new, std::span<const double> x_prev);

  Variant variant() const { return variant_; }

 private:
  Variant variant_;
  MomentumOptions options_;
  ParamVector g_new_, g_old_, y_;
};

}  // namespace lmopt
