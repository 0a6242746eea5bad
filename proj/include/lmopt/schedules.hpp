#pragma once

// Step-size / momentum schedules (alpha_k, eta_k, beta_k).
//
// Experimental kinds decay with k:
//   PolyakExp  alpha = (k+1)^{-1/2}  eta = eta0 (k+1)^{-3/4}
//   IgtExp     alpha = (k+1)^{-4/7}  eta = eta0 (k+1)^{-5/7}
//   SomExp     alpha = (k+1)^{-2/3}  eta = eta0 (k+1)^{-2/3}
//
// Theorem kinds are constant over a horizon of K+1 iterations (k = 0..K):
//   TheoremSOMv1   alpha = (K+1)^{-2/3}, eta = eta_hat (K+1)^{-2/3},
//                  eta_hat = 1/(80 L1) * (rho_lower/rho_upper)
//   TheoremSOMv2   same exponents, eta_hat = (1/3) min{1/L1, 1/sqrt(M1)}
//   TheoremIGT     alpha = (K+1)^{-4/7}, eta = eta_hat (K+1)^{-5/7},
//                  eta_hat = min{1/(3 L1), 1/(3 sqrt(M1))}
//   TheoremMVR     alpha = (K+1)^{-2/3}, eta = eta_hat (K+1)^{-2/3},
//                  eta_hat = (1/3) min{1/L1, (1/(11 calL1)) (rho_lower/rho_upper)}
//   TheoremPolyak  alpha = (K+1)^{-1/2}, eta = eta_hat (K+1)^{-3/4},
//                  eta_hat = 1/(3 L1)   (constant-horizon counterpart of PolyakExp)
//
// A zero constant inside min{...} counts as +infinity. If every term is
// infinite the schedule is rejected.
//
// Constant is a flat alpha = const_alpha, eta = eta0 schedule used by the
// equivalence harness (alpha = 1 gives memoryless steps).

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>

#include "lmopt/momentum.hpp"
#include "lmopt/norms.hpp"

namespace lmopt {

enum class ScheduleKind {
  PolyakExp,
  IgtExp,
  SomExp,
  TheoremSOMv1,
  TheoremSOMv2,
  TheoremIGT,
  TheoremMVR,
  TheoremPolyak,
  Constant,
};

std::string_view to_string(ScheduleKind k);
ScheduleKind parse_schedule_kind(std::string_view name);
bool is_theorem_kind(ScheduleKind k);
/// Experimental schedule matching a variant's momentum family.
ScheduleKind default_schedule_for(Variant v);

struct SmoothnessConfig {
  double L0 = 0.0, L1 = 0.0;
  double M0 = 0.0, M1 = 0.0;
  double calL0 = 0.0, calL1 = 0.0;
  double sigma_g = 0.0, sigma_H = 0.0;
  /// Unset means "fill from the run's norm and dimension" (Euclidean values if never resolved).
  std::optional<NormEquivConstants> norm_equiv;

  void validate() const;
  bool operator==(const SmoothnessConfig&) const = default;
};

struct BetaOneMinusAlpha {
  bool operator==(const BetaOneMinusAlpha&) const = default;
};
struct BetaConstant {
  double value = 0.5;
  bool operator==(const BetaConstant&) const = default;
};
using BetaRule = std::variant<BetaOneMinusAlpha, BetaConstant>;

struct Schedule {
  ScheduleKind kind = ScheduleKind::SomExp;
  double eta0 = 0.1;
  std::size_t horizon = 0;  // K for theorem kinds: iterations k = 0..K
  SmoothnessConfig smoothness{};
  BetaRule beta_rule = BetaOneMinusAlpha{};
  double const_alpha = 1.0;  // Constant kind only

  void validate() const;
  bool operator==(const Schedule&) const = default;
};

/// eta_hat for a theorem kind; throws ConfigError when every term is unbounded.
double theorem_eta_hat(ScheduleKind kind, const SmoothnessConfig& s);

StepCoeffs coeffs_at(const Schedule& schedule, std::size_t k);

}  // namespace lmopt
