#pragma once

// Primal/dual norms and exact linear minimization oracles over norm balls.
//
// lmo(spec, m, eta) returns argmin_{||x|| <= eta} <m, x>. Tie-breaking:
//   * lmo(0) = 0,
//   * sign(0) = 0 for the l_inf oracle,
//   * lowest index among the max |m_i| for the l_1 oracle.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "lmopt/vec.hpp"

namespace lmopt {

enum class NormKind { Euclidean, LInf, L1 };

struct NormSpec {
  NormKind kind = NormKind::Euclidean;

  NormSpec dual() const;
  bool operator==(const NormSpec&) const = default;
};

/// Constants with
///   rho_lower ||x||_2 <= ||x||_* <= rho_upper ||x||_2,
///   theta_lower ||x||_2 <= ||x|| <= theta_upper ||x||_2.
struct NormEquivConstants {
  double rho_lower = 1.0;
  double rho_upper = 1.0;
  double theta_lower = 1.0;
  double theta_upper = 1.0;

  void validate() const;
  bool operator==(const NormEquivConstants&) const = default;
};

/// Tight constants for a primal norm on R^d.
NormEquivConstants default_equiv_constants(NormSpec spec, std::size_t dim);

double norm(NormSpec spec, std::span<const double> x);
double dual_norm(NormSpec spec, std::span<const double> x);

ParamVector lmo(NormSpec spec, std::span<const double> m, double eta);
void lmo_into(NormSpec spec, std::span<const double> m, double eta, std::span<double> out);

std::string_view to_string(NormKind kind);
/// Accepts "l2"/"euclidean", "linf", "l1".
NormKind parse_norm_kind(std::string_view name);

}  // namespace lmopt
