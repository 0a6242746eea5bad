#include "lmopt/momentum.hpp"

#include <cmath>

namespace lmopt {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Polyak: return "polyak";
    case Variant::IGT: return "igt";
    case Variant::MARS: return "mars";
    case Variant::SOMv1: return "som-v1";
    case Variant::SOMv2: return "som-v2";
  }
  return "?";
}

std::string_view to_string(MarsAnchor a) { return a == MarsAnchor::New ? "new" : "old"; }

Variant parse_variant(std::string_view name) {
  if (name == "polyak") return Variant::Polyak;
  if (name == "igt") return Variant::IGT;
  if (name == "mars" || name == "storm") return Variant::MARS;
  if (name == "som-v1") return Variant::SOMv1;
  if (name == "som-v2") return Variant::SOMv2;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected polyak|igt|mars|storm|som-v1|som-v2)");
}

MarsAnchor parse_mars_anchor(std::string_view name) {
  if (name == "new") return MarsAnchor::New;
  if (name == "old") return MarsAnchor::Old;
  throw ConfigError("unknown mars anchor '" + std::string(name) + "' (expected new|old)");
}

bool uses_beta(Variant v) { return v == Variant::MARS || v == Variant::SOMv1 || v == Variant::SOMv2; }

void StepCoeffs::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be positive");
}

MomentumState make_momentum_state(ParamVector m0, Rng interp_rng) {
  MomentumState s{std::move(m0), std::move(interp_rng), std::nullopt, 1.0};
  return s;
}

namespace {

void check_momentum(const MomentumState& s, std::size_t k) {
  if (!all_finite(s.m)) throw DivergenceError(k, "non-finite momentum");
}

// m <- (1-a)(m + scale * corr) + a * g, or m <- beta * corr + g when a == 1.
void corrected_update(ParamVector& m, const StepCoeffs& c, std::span<const double> corr,
                      std::span<const double> g) {
  const double a = c.alpha;
  if (a < 1.0) {
    const double s = c.beta / (1.0 - a);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = (1.0 - a) * (m[i] + s * corr[i]) + a * g[i];
  } else {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = c.beta * corr[i] + g[i];
  }
}

}  // namespace

void polyak_update(MomentumState& state, const StepCoeffs& c, std::span<const double> grad_new) {
  require_same_size(state.m.size(), grad_new.size(), "polyak_update");
  const double a = c.alpha;
  for (std::size_t i = 0; i < state.m.size(); ++i) state.m[i] = (1.0 - a) * state.m[i] + a * grad_new[i];
  check_momentum(state, c.k);
}

ParamVector igt_extrapolate(std::span<const double> x_new, std::span<const double> x_prev, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("igt_extrapolate: alpha must lie in (0, 1]");
  require_same_size(x_new.size(), x_prev.size(), "igt_extrapolate");
  const double r = (1.0 - alpha) / alpha;
  ParamVector y(x_new.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_new[i] + r * (x_new[i] - x_prev[i]);
  return y;
}

void mars_update(MomentumState& state, const StepCoeffs& c, std::span<const double> grad_new,
                 std::span<const double> grad_old, MarsAnchor anchor) {
  require_same_size(state.m.size(), grad_new.size(), "mars_update");
  require_same_size(state.m.size(), grad_old.size(), "mars_update");
  if (c.alpha >= 1.0 && c.beta != 0.0)
    throw ConfigError("mars_update: undefined scaling beta/(1-alpha) at alpha = 1");
  const auto g = anchor == MarsAnchor::New ? grad_new : grad_old;
  const double a = c.alpha;
  auto& m = state.m;
  if (a < 1.0) {
    const double s = c.beta / (1.0 - a);
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = (1.0 - a) * (m[i] + s * (grad_new[i] - grad_old[i])) + a * g[i];
  } else {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = g[i];
  }
  check_momentum(state, c.k);
}

void som_update(MomentumState& state, const StepCoeffs& c, SomVariant variant, const Problem& problem,
                const MiniBatch& batch, std::span<const double> x_new, std::span<const double> x_prev) {
  const std::size_t d = state.m.size();
  require_same_size(x_new.size(), d, "som_update");
  require_same_size(x_prev.size(), d, "som_update");

  ParamVector disp(d);
  for (std::size_t i = 0; i < d; ++i) disp[i] = x_new[i] - x_prev[i];

  ParamVector hv(d);
  if (variant == SomVariant::V1) {
    double b = state.pinned_b ? *state.pinned_b
                              : std::uniform_real_distribution<double>(0.0, 1.0)(state.interp_rng);
    state.last_b = b;
    ParamVector xhat(d);
    for (std::size_t i = 0; i < d; ++i) xhat[i] = b * x_new[i] + (1.0 - b) * x_prev[i];
    problem.hvp(xhat, disp, batch, hv);
  } else {
    problem.hvp(x_new, disp, batch, hv);
  }
  ParamVector g(d);
  problem.value_grad(x_new, batch, g);

  corrected_update(state.m, c, hv, g);
  check_momentum(state, c.k);
}

double momentum_error_diagnostic(const Problem& problem, NormSpec norm, std::span<const double> m,
                                 std::span<const double> x) {
  ParamVector e = problem.gradient(x, problem.full());
  require_same_size(e.size(), m.size(), "momentum_error_diagnostic");
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= m[i];
  return dual_norm(norm, e);
}

void MomentumEngine::update(const Problem& problem, MomentumState& state, const StepCoeffs& coeffs,
                            const MiniBatch& batch, std::span<const double> x_new,
                            std::span<const double> x_prev) {
  StepCoeffs c = coeffs;
  if (options_.mutate_beta) c.beta = 1.0 - c.beta;
  const std::size_t d = state.m.size();
  g_new_.resize(d);
  g_old_.resize(d);

  try {
    switch (variant_) {
      case Variant::Polyak:
        problem.value_grad(x_new, batch, g_new_);
        polyak_update(state, c, g_new_);
        break;
      case Variant::IGT:
        y_ = igt_extrapolate(x_new, x_prev, c.alpha);
        if (!all_finite(y_)) throw DivergenceError(c.k, "non-finite extrapolation point");
        problem.value_grad(y_, batch, g_new_);
        polyak_update(state, c, g_new_);
        break;
      case Variant::MARS:
        problem.value_grad(x_new, batch, g_new_);
        problem.value_grad(x_prev, batch, g_old_);
        mars_update(state, c, g_new_, g_old_, options_.mars_anchor);
        break;
      case Variant::SOMv1:
        som_update(state, c, SomVariant::V1, problem, batch, x_new, x_prev);
        break;
      case Variant::SOMv2:
        som_update(state, c, SomVariant::V2, problem, batch, x_new, x_prev);
        break;
    }
  } catch (const NonFiniteError& e) {
    throw DivergenceError(c.k, e.what());
  }
}

}  // namespace lmopt
