#include "lmopt/norms.hpp"

#include <algorithm>
#include <cmath>

namespace lmopt {

namespace {

double l2(std::span<const double> x) { return norm2(x); }

double linf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double l1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double eval(NormKind kind, std::span<const double> x) {
  switch (kind) {
    case NormKind::Euclidean: return l2(x);
    case NormKind::LInf: return linf(x);
    case NormKind::L1: return l1(x);
  }
  return 0.0;
}

}  // namespace

NormSpec NormSpec::dual() const {
  switch (kind) {
    case NormKind::Euclidean: return {NormKind::Euclidean};
    case NormKind::LInf: return {NormKind::L1};
    case NormKind::L1: return {NormKind::LInf};
  }
  return {NormKind::Euclidean};
}

void NormEquivConstants::validate() const {
  if (!(rho_lower > 0 && theta_lower > 0))
    throw ConfigError("norm-equivalence constants must be positive");
  if (!(rho_lower <= rho_upper) || !(theta_lower <= theta_upper))
    throw ConfigError("norm-equivalence constants: lower bound exceeds upper bound");
}

NormEquivConstants default_equiv_constants(NormSpec spec, std::size_t dim) {
  const double sd = std::sqrt(static_cast<double>(std::max<std::size_t>(dim, 1)));
  switch (spec.kind) {
    case NormKind::Euclidean: return {1.0, 1.0, 1.0, 1.0};
    // primal l_inf: ||x||_2/sqrt(d) <= ||x||_inf <= ||x||_2, dual l_1: ||x||_2 <= ||x||_1 <= sqrt(d)||x||_2
    case NormKind::LInf: return {1.0, sd, 1.0 / sd, 1.0};
    case NormKind::L1: return {1.0 / sd, 1.0, 1.0, sd};
  }
  return {};
}

double norm(NormSpec spec, std::span<const double> x) {
  require_finite(x, "norm");
  return eval(spec.kind, x);
}

double dual_norm(NormSpec spec, std::span<const double> x) {
  require_finite(x, "dual_norm");
  return eval(spec.dual().kind, x);
}

void lmo_into(NormSpec spec, std::span<const double> m, double eta, std::span<double> out) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("lmo: eta must be positive and finite");
  require_finite(m, "lmo");
  require_same_size(m.size(), out.size(), "lmo");
  std::fill(out.begin(), out.end(), 0.0);

  switch (spec.kind) {
    case NormKind::Euclidean: {
      const double n = l2(m);
      if (n == 0.0) return;
      const double s = -eta / n;
      for (std::size_t i = 0; i < m.size(); ++i) out[i] = s * m[i];
      return;
    }
    case NormKind::LInf:
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] > 0.0)
          out[i] = -eta;
        else if (m[i] < 0.0)
          out[i] = eta;
      }
      return;
    case NormKind::L1: {
      std::size_t best = 0;
      double best_abs = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (std::abs(m[i]) > best_abs) {
          best_abs = std::abs(m[i]);
          best = i;
        }
      }
      if (best_abs == 0.0) return;
      out[best] = m[best] > 0.0 ? -eta : eta;
      return;
    }
  }
}

ParamVector lmo(NormSpec spec, std::span<const double> m, double eta) {
  ParamVector out(m.size());
  lmo_into(spec, m, eta, out);
  return out;
}

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Euclidean: return "l2";
    case NormKind::LInf: return "linf";
    case NormKind::L1: return "l1";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "l2" || name == "euclidean") return NormKind::Euclidean;
  if (name == "linf") return NormKind::LInf;
  if (name == "l1") return NormKind::L1;
  throw ConfigError("unknown norm '" + std::string(name) + "' (expected l2|linf|l1)");
}

}  // namespace lmopt
