#include "lmopt/schedules.hpp"

#include <cmath>
#include <limits>

namespace lmopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/x with 1/0 = +inf.
double recip(double x) { return x > 0.0 ? 1.0 / x : kInf; }

double finite_or_throw(double v, ScheduleKind kind) {
  if (!std::isfinite(v))
    throw ConfigError("eta_hat unbounded for schedule '" + std::string(to_string(kind)) +
                      "'; supply smoothness constants");
  return v;
}

}  // namespace

std::string_view to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::PolyakExp: return "polyak-exp";
    case ScheduleKind::IgtExp: return "igt-exp";
    case ScheduleKind::SomExp: return "som-exp";
    case ScheduleKind::TheoremSOMv1: return "theorem-som-v1";
    case ScheduleKind::TheoremSOMv2: return "theorem-som-v2";
    case ScheduleKind::TheoremIGT: return "theorem-igt";
    case ScheduleKind::TheoremMVR: return "theorem-mvr";
    case ScheduleKind::TheoremPolyak: return "theorem-polyak";
    case ScheduleKind::Constant: return "constant";
  }
  return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  for (auto k : {ScheduleKind::PolyakExp, ScheduleKind::IgtExp, ScheduleKind::SomExp,
                 ScheduleKind::TheoremSOMv1, ScheduleKind::TheoremSOMv2, ScheduleKind::TheoremIGT,
                 ScheduleKind::TheoremMVR, ScheduleKind::TheoremPolyak, ScheduleKind::Constant})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown schedule '" + std::string(name) + "'");
}

bool is_theorem_kind(ScheduleKind k) {
  return k == ScheduleKind::TheoremSOMv1 || k == ScheduleKind::TheoremSOMv2 ||
         k == ScheduleKind::TheoremIGT || k == ScheduleKind::TheoremMVR ||
         k == ScheduleKind::TheoremPolyak;
}

ScheduleKind default_schedule_for(Variant v) {
  switch (v) {
    case Variant::Polyak: return ScheduleKind::PolyakExp;
    case Variant::IGT: return ScheduleKind::IgtExp;
    default: return ScheduleKind::SomExp;
  }
}

void SmoothnessConfig::validate() const {
  for (double c : {L0, L1, M0, M1, calL0, calL1, sigma_g, sigma_H})
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("smoothness constants must be finite and >= 0");
  if (norm_equiv) norm_equiv->validate();
}

void Schedule::validate() const {
  if (is_theorem_kind(kind)) {
    smoothness.validate();
    theorem_eta_hat(kind, smoothness);
  } else if (!(eta0 > 0.0) || !std::isfinite(eta0)) {
    throw ConfigError("schedule: eta0 must be positive");
  }
  if (kind == ScheduleKind::Constant && !(const_alpha > 0.0 && const_alpha <= 1.0))
    throw ConfigError("schedule: constant alpha must lie in (0, 1]");
  if (const auto* c = std::get_if<BetaConstant>(&beta_rule); c && !(c->value >= 0.0 && c->value <= 1.0))
    throw ConfigError("schedule: constant beta must lie in [0, 1]");
}

double theorem_eta_hat(ScheduleKind kind, const SmoothnessConfig& s) {
  const NormEquivConstants eq = s.norm_equiv.value_or(NormEquivConstants{});
  const double ratio = eq.rho_lower / eq.rho_upper;  // (rho_upper/rho_lower)^{-1}
  switch (kind) {
    case ScheduleKind::TheoremSOMv1:
      return finite_or_throw(recip(80.0 * s.L1) * ratio, kind);
    case ScheduleKind::TheoremSOMv2:
      return finite_or_throw(std::min(recip(s.L1), recip(std::sqrt(s.M1))) / 3.0, kind);
    case ScheduleKind::TheoremIGT:
      return finite_or_throw(std::min(recip(3.0 * s.L1), recip(3.0 * std::sqrt(s.M1))), kind);
    case ScheduleKind::TheoremMVR:
      return finite_or_throw(std::min(recip(s.L1), recip(11.0 * s.calL1) * ratio) / 3.0, kind);
    case ScheduleKind::TheoremPolyak:
      return finite_or_throw(recip(3.0 * s.L1), kind);
    default:
      throw ConfigError("theorem_eta_hat: not a theorem schedule");
  }
}

StepCoeffs coeffs_at(const Schedule& s, std::size_t k) {
  StepCoeffs c;
  c.k = k;
  const double kp1 = static_cast<double>(k) + 1.0;
  const double Kp1 = static_cast<double>(s.horizon) + 1.0;

  switch (s.kind) {
    case ScheduleKind::PolyakExp:
      c.alpha = 1.0 / std::sqrt(kp1);
      c.eta = s.eta0 / std::pow(kp1, 3.0 / 4.0);
      break;
    case ScheduleKind::IgtExp:
      c.alpha = 1.0 / std::pow(kp1, 4.0 / 7.0);
      c.eta = s.eta0 / std::pow(kp1, 5.0 / 7.0);
      break;
    case ScheduleKind::SomExp:
      c.alpha = 1.0 / std::pow(kp1, 2.0 / 3.0);
      c.eta = s.eta0 / std::pow(kp1, 2.0 / 3.0);
      break;
    case ScheduleKind::TheoremSOMv1:
    case ScheduleKind::TheoremSOMv2:
    case ScheduleKind::TheoremMVR:
      c.alpha = 1.0 / std::pow(Kp1, 2.0 / 3.0);
      c.eta = theorem_eta_hat(s.kind, s.smoothness) / std::pow(Kp1, 2.0 / 3.0);
      break;
    case ScheduleKind::TheoremIGT:
      c.alpha = 1.0 / std::pow(Kp1, 4.0 / 7.0);
      c.eta = theorem_eta_hat(s.kind, s.smoothness) / std::pow(Kp1, 5.0 / 7.0);
      break;
    case ScheduleKind::TheoremPolyak:
      c.alpha = 1.0 / std::sqrt(Kp1);
      c.eta = theorem_eta_hat(s.kind, s.smoothness) / std::pow(Kp1, 3.0 / 4.0);
      break;
    case ScheduleKind::Constant:
      c.alpha = s.const_alpha;
      c.eta = s.eta0;
      break;
  }

  if (std::holds_alternative<BetaOneMinusAlpha>(s.beta_rule))
    c.beta = 1.0 - c.alpha;
  else
    c.beta = std::get<BetaConstant>(s.beta_rule).value;
  return c;
}

}  // namespace lmopt
