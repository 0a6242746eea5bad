#include "lmopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "lmopt/logreg.hpp"
#include "lmopt/mlp.hpp"
#include "lmopt/runner.hpp"
#include "lmopt/schedules.hpp"

namespace lmopt {

ParamVector fd_gradient(const Problem& problem, std::span<const double> x, const MiniBatch& batch, FdSpec fd) {
  ParamVector g(x.size());
  ParamVector xp(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double eps = fd.rel_step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + eps;
    const double fp = problem.value(xp, batch);
    xp[i] = x[i] - eps;
    const double fm = problem.value(xp, batch);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * eps);
  }
  return g;
}

double fd_partial(const Problem& problem, std::span<const double> x, const MiniBatch& batch, std::size_t i,
                  FdSpec fd) {
  ParamVector xp(x.begin(), x.end());
  const double eps = fd.rel_step * (1.0 + std::abs(x[i]));
  xp[i] = x[i] + eps;
  const double fp = problem.value(xp, batch);
  xp[i] = x[i] - eps;
  const double fm = problem.value(xp, batch);
  return (fp - fm) / (2.0 * eps);
}

ParamVector fd_hvp(const Problem& problem, std::span<const double> x, std::span<const double> v,
                   const MiniBatch& batch, FdSpec fd) {
  const std::size_t d = x.size();
  ParamVector out(d, 0.0);
  const double nv = norm2(v);
  if (nv == 0.0) return out;
  const double eps = fd.rel_step * (1.0 + norm2(x)) / (1.0 + nv);
  ParamVector xp(d), xm(d);
  for (std::size_t i = 0; i < d; ++i) {
    xp[i] = x[i] + eps * v[i];
    xm[i] = x[i] - eps * v[i];
  }
  const ParamVector gp = problem.gradient(xp, batch);
  const ParamVector gm = problem.gradient(xm, batch);
  for (std::size_t i = 0; i < d; ++i) out[i] = (gp[i] - gm[i]) / (2.0 * eps);
  return out;
}

namespace {

// Uniform point on the unit sphere of `spec` (boundary) scaled by r.
ParamVector sample_in_ball(NormSpec spec, std::size_t d, double eta, bool boundary, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  ParamVector x(d);
  const double r = boundary ? eta : eta * std::pow(unif(rng), 1.0 / static_cast<double>(d));

  switch (spec.kind) {
    case NormKind::Euclidean: {
      for (auto& v : x) v = normal(rng);
      const double n = norm2(x);
      for (auto& v : x) v *= r / n;
      break;
    }
    case NormKind::LInf: {
      for (auto& v : x) v = eta * (2.0 * unif(rng) - 1.0);
      if (boundary) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
        x[j] = unif(rng) < 0.5 ? -eta : eta;
      }
      break;
    }
    case NormKind::L1: {
      double s = 0.0;
      for (auto& v : x) {
        v = expo(rng);
        s += v;
      }
      for (auto& v : x) v = (unif(rng) < 0.5 ? -1.0 : 1.0) * r * v / s;
      break;
    }
  }
  return x;
}

}  // namespace

LmoCheckResult lmo_bruteforce_check(NormSpec spec, std::span<const double> m, double eta, std::size_t samples,
                                    Rng& rng) {
  LmoCheckResult res;
  const ParamVector s = lmo(spec, m, eta);
  const double obj = dot(m, s);
  const double dn = dual_norm(spec, m);
  res.norm_ratio = norm(spec, s) / eta;
  if (dn == 0.0) {
    res.ok = obj == 0.0 && norm(spec, s) == 0.0;
    return res;
  }
  res.identity_rel_err = std::abs(obj + eta * dn) / (eta * dn);
  res.worst_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < samples; ++t) {
    const ParamVector x = sample_in_ball(spec, m.size(), eta, t % 2 == 1, rng);
    res.worst_gap = std::max(res.worst_gap, obj - dot(m, x));
  }
  res.ok = res.identity_rel_err <= 1e-12 && res.norm_ratio <= 1.0 + 1e-12 && res.worst_gap <= 1e-10;
  return res;
}

std::vector<ProbePoint> smoothness_probe(const Problem& problem, NormSpec norm_spec,
                                         std::span<const ParamVector> trajectory) {
  std::vector<ProbePoint> out;
  if (trajectory.size() < 2) return out;
  const MiniBatch full = problem.full();
  ParamVector g_prev = problem.gradient(trajectory[0], full);
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    const auto& x = trajectory[t - 1];
    const auto& y = trajectory[t];
    ParamVector dx(x.size());
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = x[i] - y[i];
    const double step = norm(norm_spec, dx);
    if (step == 0.0) continue;
    ParamVector g = problem.gradient(y, full);
    ParamVector dg(g.size());
    for (std::size_t i = 0; i < dg.size(); ++i) dg[i] = g_prev[i] - g[i];
    out.push_back({std::max(dual_norm(norm_spec, g_prev), dual_norm(norm_spec, g)), dual_norm(norm_spec, dg) / step});
    g_prev = std::move(g);
  }
  return out;
}

AffineFit fit_affine(std::span<const ProbePoint> points) {
  AffineFit fit;
  if (points.empty()) return fit;
  const double n = static_cast<double>(points.size());
  double mg = 0.0, mc = 0.0;
  for (const auto& p : points) {
    mg += p.grad_norm;
    mc += p.curvature;
  }
  mg /= n;
  mc /= n;
  double sgg = 0.0, sgc = 0.0;
  for (const auto& p : points) {
    sgg += (p.grad_norm - mg) * (p.grad_norm - mg);
    sgc += (p.grad_norm - mg) * (p.curvature - mc);
  }
  fit.L1 = sgg > 0.0 ? sgc / sgg : 0.0;
  fit.L0 = mc - fit.L1 * mg;
  return fit;
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::ExpectedDifferent: return "EXPECTED-DIFFERENT";
  }
  return "?";
}

bool EquivalenceReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
}

nlohmann::json EquivalenceReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j = {{"name", c.name}, {"status", to_string(c.status)}, {"max_abs_diff", c.max_abs_diff}};
    j["first_diverging_k"] = c.first_diverging_k ? nlohmann::json(*c.first_diverging_k) : nlohmann::json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(j);
  }
  return {{"passed", passed()}, {"checks", arr}};
}

namespace {

MiniBatch next_batch(const Problem& problem, const RunConfig& cfg, Rng& batch_rng) {
  return cfg.full_batch ? problem.full() : sample_batch(batch_rng, problem.num_samples(), cfg.batch_size);
}

}  // namespace

std::vector<IterateState> reference_storm_trajectory(const Problem& problem, const RunConfig& config) {
  const RunConfig cfg = resolve_config(config, problem.dim());
  Rng batch_rng = make_stream(cfg.seed, StreamTag::Batch);
  Rng init_rng = make_stream(cfg.seed, StreamTag::Init);
  ParamVector x = standard_normal_vector(init_rng, problem.dim());
  ParamVector m = problem.gradient(x, next_batch(problem, cfg, batch_rng));
  ParamVector step(x.size());
  std::vector<IterateState> xs;
  for (std::size_t k = 0; k < cfg.iters; ++k) {
    const double a = coeffs_at(cfg.schedule, k).alpha;
    lmo_into(cfg.norm, m, coeffs_at(cfg.schedule, k).eta, step);
    const ParamVector x_old = x;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step[i];
    const MiniBatch b = next_batch(problem, cfg, batch_rng);
    const ParamVector g_new = problem.gradient(x, b);
    const ParamVector g_old = problem.gradient(x_old, b);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = (1.0 - a) * (m[i] + (g_new[i] - g_old[i])) + a * g_new[i];
    xs.push_back({x, m});
  }
  return xs;
}

std::vector<IterateState> reference_memoryless_trajectory(const Problem& problem, const RunConfig& config) {
  const RunConfig cfg = resolve_config(config, problem.dim());
  Rng batch_rng = make_stream(cfg.seed, StreamTag::Batch);
  Rng init_rng = make_stream(cfg.seed, StreamTag::Init);
  ParamVector x = standard_normal_vector(init_rng, problem.dim());
  ParamVector g = problem.gradient(x, next_batch(problem, cfg, batch_rng));
  ParamVector step(x.size());
  std::vector<IterateState> xs;
  for (std::size_t k = 0; k < cfg.iters; ++k) {
    lmo_into(cfg.norm, g, coeffs_at(cfg.schedule, k).eta, step);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step[i];
    g = problem.gradient(x, next_batch(problem, cfg, batch_rng));
    xs.push_back({x, g});
  }
  return xs;
}

namespace {

struct Recorded {
  std::vector<IterateState> xs;
  std::optional<std::size_t> stopped_at;
  std::string error;
};

Recorded record(const Problem& problem, const RunConfig& cfg) {
  Recorded r;
  try {
    const Trace t = run(problem, cfg, [&](std::size_t, std::span<const double> x, std::span<const double> m) {
      r.xs.push_back({ParamVector(x.begin(), x.end()), ParamVector(m.begin(), m.end())});
    });
    if (t.diverged_at) {
      r.stopped_at = *t.diverged_at;
      r.error = t.divergence_message;
    }
  } catch (const std::exception& e) {
    r.stopped_at = r.xs.size();
    r.error = e.what();
  }
  return r;
}

EquivalenceCheck compare_trajectories(std::string name, const Recorded& subject,
                                      const std::vector<IterateState>& reference, std::size_t iters,
                                      bool expect_equal) {
  EquivalenceCheck c;
  c.name = std::move(name);
  for (std::size_t k = 0; k < iters; ++k) {
    if (k >= subject.xs.size() || k >= reference.size()) {
      if (!c.first_diverging_k) c.first_diverging_k = k;
      c.note = subject.error.empty() ? "trajectory ended early" : subject.error;
      c.max_abs_diff = std::numeric_limits<double>::infinity();
      break;
    }
    const double diff =
        std::max(max_abs_diff(subject.xs[k].x, reference[k].x), max_abs_diff(subject.xs[k].m, reference[k].m));
    if (diff != 0.0 && !c.first_diverging_k) c.first_diverging_k = k;
    c.max_abs_diff = std::max(c.max_abs_diff, diff);
  }
  const bool equal = !c.first_diverging_k;
  if (expect_equal)
    c.status = equal ? CheckStatus::Pass : CheckStatus::Fail;
  else
    c.status = equal ? CheckStatus::Fail : CheckStatus::ExpectedDifferent;
  return c;
}

}  // namespace

EquivalenceReport equivalence_suite(const EquivalenceOptions& options) {
  auto data = std::make_shared<const Dataset>(synthesize_dataset(20, 5, options.seed + 17));
  const LogRegWelsch problem(data, 0.01);

  RunConfig base;
  base.problem.synthetic = SyntheticSpec{20, 5, options.seed + 17};
  base.batch_size = 4;
  base.iters = options.iters;
  base.seed = options.seed;
  base.eval_every = options.iters;
  base.schedule.kind = ScheduleKind::SomExp;
  base.schedule.eta0 = 0.05;
  base.schedule.beta_rule = BetaOneMinusAlpha{};

  auto subject = [&](RunConfig c) {
    c.mutate_beta = options.mutate_beta;
    return c;
  };
  const auto iters = options.iters;

  EquivalenceReport rep;
  for (NormKind nk : {NormKind::Euclidean, NormKind::LInf}) {
    const std::string tag = std::string("[") + std::string(to_string(nk)) + "]";
    RunConfig cfg = base;
    cfg.norm.kind = nk;

    {
      RunConfig mars = cfg;
      mars.variant = Variant::MARS;
      const auto storm = reference_storm_trajectory(problem, mars);
      rep.checks.push_back(compare_trajectories("mars(beta=1-alpha) == storm reference " + tag,
                                                record(problem, subject(mars)), storm, iters, true));
      mars.mars_anchor = MarsAnchor::Old;
      rep.checks.push_back(compare_trajectories("mars(anchor=old) vs storm reference " + tag,
                                                record(problem, subject(mars)), storm, iters, false));
    }
    {
      RunConfig v1 = cfg, v2 = cfg;
      v1.variant = Variant::SOMv1;
      v1.som_pinned_b = 1.0;
      v2.variant = Variant::SOMv2;
      // Both sides run through the engine; the mutation applies to the V1 side only.
      const Recorded ref = record(problem, v2);
      rep.checks.push_back(
          compare_trajectories("som-v1(u=1) == som-v2 " + tag, record(problem, subject(v1)), ref.xs, iters, true));
    }
    {
      RunConfig polyak = cfg;
      polyak.variant = Variant::Polyak;
      const Recorded ref = record(problem, polyak);
      for (Variant v : {Variant::MARS, Variant::SOMv1, Variant::SOMv2}) {
        RunConfig c = cfg;
        c.variant = v;
        c.schedule.beta_rule = BetaConstant{0.0};
        rep.checks.push_back(compare_trajectories(std::string(to_string(v)) + "(beta=0) == polyak " + tag,
                                                  record(problem, subject(c)), ref.xs, iters, true));
      }
    }
    {
      RunConfig flat = cfg;
      flat.schedule.kind = ScheduleKind::Constant;
      flat.schedule.const_alpha = 1.0;
      flat.schedule.eta0 = 0.05;
      flat.schedule.beta_rule = BetaConstant{0.0};
      const auto ref = reference_memoryless_trajectory(problem, flat);
      for (Variant v : {Variant::Polyak, Variant::IGT, Variant::MARS, Variant::SOMv1, Variant::SOMv2}) {
        RunConfig c = flat;
        c.variant = v;
        rep.checks.push_back(compare_trajectories(std::string(to_string(v)) + "(alpha=1,beta=0) == memoryless " + tag,
                                                  record(problem, subject(c)), ref, iters, true));
      }
    }
  }
  return rep;
}

nlohmann::json run_verify_suite(const VerifyOptions& opt) {
  nlohmann::json report;
  bool all_ok = true;
  Rng rng = make_stream(opt.seed, StreamTag::Data);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto random_vec = [&](std::size_t d, double scale) {
    ParamVector v(d);
    for (auto& e : v) e = scale * normal(rng);
    return v;
  };

  // Derivatives
  {
    auto data = std::make_shared<const Dataset>(synthesize_dataset(200, 60, opt.seed + 1));
    const LogRegWelsch lr(data, 0.01);
    auto mdata = std::make_shared<const Dataset>(synthesize_dataset(40, 8, opt.seed + 2));
    const MlpWelsch mlp(mdata, MlpArchitecture{8, 6, 5, Activation::Tanh}, 0.01);

    double lr_grad = 0, lr_hvp = 0, mlp_grad = 0, mlp_hvp = 0, sym = 0;
    for (std::size_t t = 0; t < opt.derivative_points; ++t) {
      const MiniBatch b = sample_batch(rng, data->n_samples, 16);
      const ParamVector x = random_vec(lr.dim(), 1.0), v = random_vec(lr.dim(), 1.0);
      lr_grad = std::max(lr_grad, rel_error(fd_gradient(lr, x, b), lr.gradient(x, b)));
      lr_hvp = std::max(lr_hvp, rel_error(fd_hvp(lr, x, v, b), lr.hessian_vector(x, v, b)));

      const MiniBatch mb = sample_batch(rng, mdata->n_samples, 16);
      const ParamVector w = random_vec(mlp.dim(), 1.0), u = random_vec(mlp.dim(), 1.0),
                        z = random_vec(mlp.dim(), 1.0);
      const ParamVector g = mlp.gradient(w, mb);
      ParamVector fd_sub, an_sub;
      for (int c = 0; c < 20; ++c) {
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, mlp.dim() - 1)(rng);
        fd_sub.push_back(fd_partial(mlp, w, mb, i));
        an_sub.push_back(g[i]);
      }
      mlp_grad = std::max(mlp_grad, rel_error(fd_sub, an_sub));
      const ParamVector hu = mlp.hessian_vector(w, u, mb);
      mlp_hvp = std::max(mlp_hvp, rel_error(fd_hvp(mlp, w, u, mb), hu));
      const double a = dot(z, hu), bb = dot(u, mlp.hessian_vector(w, z, mb));
      sym = std::max(sym, std::abs(a - bb) / std::max({std::abs(a), std::abs(bb), 1e-300}));
    }
    const bool ok = lr_grad < 1e-6 && lr_hvp < 1e-5 && mlp_grad < 1e-5 && mlp_hvp < 1e-4 && sym < 1e-8;
    all_ok = all_ok && ok;
    report["derivatives"] = {{"passed", ok},
                             {"logreg_grad_rel_err", lr_grad},
                             {"logreg_hvp_rel_err", lr_hvp},
                             {"mlp_grad_rel_err", mlp_grad},
                             {"mlp_hvp_rel_err", mlp_hvp},
                             {"mlp_hvp_symmetry_rel_err", sym}};
  }

  // LMO
  {
    std::size_t failures = 0;
    double worst_identity = 0, worst_norm = 0, worst_gap = -1e300;
    std::uniform_int_distribution<int> pick_norm(0, 2);
    std::uniform_int_distribution<std::size_t> pick_dim(1, 20);
    std::uniform_real_distribution<double> log_eta(-2.0, 2.0);
    for (std::size_t t = 0; t < opt.lmo_triples; ++t) {
      const NormSpec spec{static_cast<NormKind>(pick_norm(rng))};
      const ParamVector m = random_vec(pick_dim(rng), 1.0);
      const double eta = std::pow(10.0, log_eta(rng));
      const auto r = lmo_bruteforce_check(spec, m, eta, opt.lmo_samples, rng);
      failures += r.ok ? 0 : 1;
      worst_identity = std::max(worst_identity, r.identity_rel_err);
      worst_norm = std::max(worst_norm, r.norm_ratio);
      worst_gap = std::max(worst_gap, r.worst_gap);
    }
    all_ok = all_ok && failures == 0;
    report["lmo"] = {{"passed", failures == 0},      {"triples", opt.lmo_triples},
                     {"failures", failures},         {"worst_identity_rel_err", worst_identity},
                     {"worst_norm_ratio", worst_norm}, {"worst_sample_gap", worst_gap}};
  }

  // Equivalences
  {
    const auto rep = equivalence_suite(EquivalenceOptions{200, opt.seed, false});
    all_ok = all_ok && rep.passed();
    report["equivalence"] = rep.to_json();
  }

  report["passed"] = all_ok;
  return report;
}

}  // namespace lmopt
