// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lmopt/config.hpp"
#include "lmopt/dataset.hpp"
#include "lmopt/errors.hpp"
#include "lmopt/logreg.hpp"
#include "lmopt/mlp.hpp"
#include "lmopt/norms.hpp"
#include "lmopt/runner.hpp"
#include "lmopt/sampling.hpp"
#include "lmopt/schedules.hpp"
#include "lmopt/trace.hpp"
#include "lmopt/verify.hpp"

using namespace lmopt;

namespace {

constexpr std::size_t kSeeds = 5;
constexpr std::size_t kIters = 20000;
constexpr std::size_t kEvalEvery = 10;
const std::vector<double> kEtaGrid = {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_error(std::span<const double> approx, std::span<const double> exact) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    num += (approx[i] - exact[i]) * (approx[i] - exact[i]);
    den += exact[i] * exact[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

// splice from $LMOPT_DATA_DIR when present, otherwise the synthetic stand-in.
struct Benchmark {
  ProblemSpec spec;
  std::shared_ptr<const Dataset> data;
  std::string label;
};

Benchmark benchmark_problem() {
  Benchmark b;
  try {
    b.data = load_dataset(b.spec);
    b.label = "splice";
  } catch (const std::exception&) {
    b.spec.synthetic = SyntheticSpec{};
    b.data = load_dataset(b.spec);
    b.label = fmt("synthetic %zux%zu", b.data->n_samples, b.data->n_features);
  }
  return b;
}

RunConfig base_config(const Benchmark& b) {
  RunConfig c;
  c.problem = b.spec;
  c.norm = NormSpec{NormKind::Euclidean};
  c.iters = kIters;
  c.eval_every = kEvalEvery;
  return c;
}

double mean_final(const std::vector<Trace>& traces, std::size_t from, std::size_t count,
                  double TraceRow::*field) {
  double s = 0;
  for (std::size_t i = from; i < from + count; ++i) {
    if (traces[i].diverged_at || traces[i].rows.empty()) return INFINITY;
    s += traces[i].rows.back().*field;
  }
  return s / static_cast<double>(count);
}

// ---------------------------------------------------------------------------

Outcome lmo_correctness() {
  Rng rng = make_stream(101, StreamTag::Data);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick_norm(0, 2);
  std::uniform_int_distribution<std::size_t> pick_dim(1, 50);
  std::uniform_real_distribution<double> log_eta(-3.0, 3.0);
  std::size_t failures = 0;
  double worst_id = 0, worst_ratio = 0, worst_gap = -INFINITY;
  std::map<int, int> per_norm;
  for (int t = 0; t < 1000; ++t) {
    const NormSpec spec{static_cast<NormKind>(pick_norm(rng))};
    ++per_norm[static_cast<int>(spec.kind)];
    ParamVector m(pick_dim(rng));
    for (auto& e : m) e = normal(rng);
    const double eta = std::pow(10.0, log_eta(rng));
    const auto r = lmo_bruteforce_check(spec, m, eta, 1000, rng);
    failures += r.ok ? 0 : 1;
    worst_id = std::max(worst_id, r.identity_rel_err);
    worst_ratio = std::max(worst_ratio, r.norm_ratio);
    worst_gap = std::max(worst_gap, r.worst_gap);
  }
  return {failures == 0 && per_norm.size() == 3,
          fmt("1000 triples x 1000 samples, failures=%zu, identity rel err %.1e, max |s|/eta %.17g, "
              "worst sample gap %.1e",
              failures, worst_id, worst_ratio, worst_gap)};
}

Outcome derivative_oracles(const Benchmark& b) {
  Rng rng = make_stream(202, StreamTag::Data);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_vec = [&](std::size_t d, double scale) {
    ParamVector v(d);
    for (auto& e : v) e = scale * normal(rng);
    return v;
  };

  const LogRegWelsch lr(b.data, 0.01);
  const MlpWelsch mlp(b.data, MlpArchitecture{b.data->n_features, 32, 16, Activation::Tanh}, 0.01);

  double lr_grad = 0, lr_hvp = 0, mlp_grad = 0, mlp_hvp = 0, sym = 0;
  auto symmetry = [&](const Problem& p, std::span<const double> x, const MiniBatch& mb) {
    const ParamVector u = random_vec(p.dim(), 1.0), z = random_vec(p.dim(), 1.0);
    const double a = dot(z, p.hessian_vector(x, u, mb)), c = dot(u, p.hessian_vector(x, z, mb));
    return std::abs(a - c) / std::max({std::abs(a), std::abs(c), 1e-300});
  };
  for (int t = 0; t < 50; ++t) {
    const MiniBatch mb = sample_batch(rng, b.data->n_samples, 16);
    const ParamVector x = random_vec(lr.dim(), 1.0), v = random_vec(lr.dim(), 1.0);
    lr_grad = std::max(lr_grad, rel_error(fd_gradient(lr, x, mb), lr.gradient(x, mb)));
    lr_hvp = std::max(lr_hvp, rel_error(fd_hvp(lr, x, v, mb), lr.hessian_vector(x, v, mb)));
    sym = std::max(sym, symmetry(lr, x, mb));

    const ParamVector w = random_vec(mlp.dim(), 0.5), u = random_vec(mlp.dim(), 1.0);
    mlp_grad = std::max(mlp_grad, rel_error(fd_gradient(mlp, w, mb), mlp.gradient(w, mb)));
    mlp_hvp = std::max(mlp_hvp, rel_error(fd_hvp(mlp, w, u, mb), mlp.hessian_vector(w, u, mb)));
    sym = std::max(sym, symmetry(mlp, w, mb));
  }
  const bool ok = lr_grad < 1e-6 && mlp_grad < 1e-5 && lr_hvp < 1e-5 && mlp_hvp < 1e-4 && sym < 1e-8;
  return {ok, fmt("50 points; grad rel err logreg %.1e (<1e-6) mlp %.1e (<1e-5); hvp logreg %.1e (<1e-5) "
                  "mlp %.1e (<1e-4); symmetry %.1e (<1e-8)",
                  lr_grad, mlp_grad, lr_hvp, mlp_hvp, sym)};
}

Outcome algebraic_equivalences() {
  const auto rep = equivalence_suite(EquivalenceOptions{200, 0, false});
  std::size_t pass = 0, expected_diff = 0;
  double worst = 0;
  std::string failed;
  for (const auto& c : rep.checks) {
    if (c.status == CheckStatus::Pass) {
      ++pass;
      worst = std::max(worst, c.max_abs_diff);
    } else if (c.status == CheckStatus::ExpectedDifferent) {
      ++expected_diff;
    } else {
      failed += " [" + c.name + "]";
    }
  }
  return {rep.passed() && worst == 0.0,
          fmt("%zu bitwise checks pass over 200 iterations, max abs diff %g, %zu expected-different",
              pass, worst, expected_diff) +
              (failed.empty() ? "" : "; failed:" + failed)};
}

struct SweepResult {
  double eta0 = 0;
  double loss = INFINITY;
  double grad = INFINITY;
};

// Per variant: mean over seeds of the final running minima at the eta0 with the
// lowest mean running-min loss.
SweepResult sweep_best(const Problem& problem, const RunConfig& proto) {
  std::vector<RunConfig> configs;
  for (double eta0 : kEtaGrid)
    for (std::size_t s = 0; s < kSeeds; ++s) {
      RunConfig c = proto;
      c.schedule.eta0 = eta0;
      c.seed = s;
      configs.push_back(c);
    }
  const auto traces = run_many(problem, configs);
  SweepResult best;
  for (std::size_t e = 0; e < kEtaGrid.size(); ++e) {
    const double loss = mean_final(traces, e * kSeeds, kSeeds, &TraceRow::runmin_loss);
    if (loss < best.loss)
      best = {kEtaGrid[e], loss, mean_final(traces, e * kSeeds, kSeeds, &TraceRow::runmin_grad)};
  }
  return best;
}

Outcome variant_ordering(const Benchmark& b, const Problem& problem) {
  std::map<Variant, SweepResult> r;
  for (Variant v : {Variant::Polyak, Variant::SOMv1, Variant::SOMv2}) {
    RunConfig c = base_config(b);
    c.variant = v;
    c.schedule.kind = default_schedule_for(v);
    r[v] = sweep_best(problem, c);
  }
  const auto& p = r[Variant::Polyak];
  const auto& s1 = r[Variant::SOMv1];
  const auto& s2 = r[Variant::SOMv2];
  const bool loss_order = s2.loss <= s1.loss && s1.loss <= p.loss;
  const bool grad_order = s1.grad < p.grad && s2.grad < p.grad;
  return {loss_order && grad_order,
          fmt("%s, B=1; runmin loss SOM-V2 %.9g (eta0=%g) <= SOM-V1 %.9g (eta0=%g) <= Polyak %.9g "
              "(eta0=%g): %s; runmin grad SOM-V1 %.6g, SOM-V2 %.6g < Polyak %.6g: %s",
              b.label.c_str(), s2.loss, s2.eta0, s1.loss, s1.eta0, p.loss, p.eta0,
              loss_order ? "yes" : "no", s1.grad, s2.grad, p.grad, grad_order ? "yes" : "no")};
}

Outcome batch_ordering(const Benchmark& b, const Problem& problem) {
  std::map<std::size_t, SweepResult> r;
  for (std::size_t batch : {1, 16, 32}) {
    RunConfig c = base_config(b);
    c.variant = Variant::SOMv2;
    c.schedule.kind = ScheduleKind::SomExp;
    c.schedule.beta_rule = BetaConstant{0.5};
    c.batch_size = batch;
    r[batch] = sweep_best(problem, c);
  }
  const bool ok = r[32].loss <= r[16].loss && r[16].loss <= r[1].loss;
  return {ok, fmt("beta-SOM-V2 (beta=0.5) runmin loss B=32 %.9g (eta0=%g) <= B=16 %.9g (eta0=%g) <= "
                  "B=1 %.9g (eta0=%g)",
                  r[32].loss, r[32].eta0, r[16].loss, r[16].eta0, r[1].loss, r[1].eta0)};
}

// Constants for the rate-shape runs, measured with smoothness_probe along
// full-batch trajectories of the benchmark problem: curvature <= 0.21 and
// Hessian-Lipschitz ratio <= 0.08 with no growth in the gradient norm. Any
// positive L1 is then admissible; L1 = L0 / ||grad f(x_0)|| balances the two terms.
SmoothnessConfig rate_shape_constants() {
  SmoothnessConfig s;
  s.L0 = 0.21;
  s.L1 = 0.4;
  s.M0 = 0.08;
  s.M1 = 0.15;
  s.calL0 = 0.21;
  s.calL1 = 0.4;
  return s;
}

Outcome rate_shape(const Benchmark& b, const Problem& problem) {
  const std::vector<std::size_t> horizons = {500, 2000, 8000};
  const std::vector<std::pair<Variant, ScheduleKind>> variants = {
      {Variant::Polyak, ScheduleKind::TheoremPolyak}, {Variant::IGT, ScheduleKind::TheoremIGT},
      {Variant::MARS, ScheduleKind::TheoremMVR},      {Variant::SOMv1, ScheduleKind::TheoremSOMv1},
      {Variant::SOMv2, ScheduleKind::TheoremSOMv2}};
  std::vector<RunConfig> configs;
  for (const auto& [v, kind] : variants)
    for (std::size_t K : horizons) {
      RunConfig c = base_config(b);
      c.variant = v;
      c.schedule.kind = kind;
      c.schedule.smoothness = rate_shape_constants();
      c.full_batch = true;
      c.iters = K + 1;  // horizon K covers k = 0..K
      c.eval_every = 1;
      configs.push_back(c);
    }
  const auto traces = run_many(problem, configs);

  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    std::vector<double> lx, ly, g;
    for (std::size_t j = 0; j < horizons.size(); ++j) {
      const auto& t = traces[i * horizons.size() + j];
      const double mg = t.diverged_at ? INFINITY : t.rows.back().runmin_grad;
      g.push_back(mg);
      lx.push_back(std::log(static_cast<double>(horizons[j])));
      ly.push_back(std::log(mg));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t j = 0; j < lx.size(); ++j) {
      sxy += (lx[j] - mx) * (ly[j] - my);
      sxx += (lx[j] - mx) * (lx[j] - mx);
    }
    const double slope = sxy / sxx;
    const bool monotone = g[0] >= g[1] && g[1] >= g[2];
    const bool in_range = slope >= -0.8 && slope <= -0.05;
    ok = ok && monotone && in_range;
    detail += fmt("%s%s: min grad %.3g/%.3g/%.3g slope %+.3f%s", i ? "; " : "",
                  std::string(to_string(variants[i].first)).c_str(), g[0], g[1], g[2], slope,
                  monotone && in_range ? "" : (monotone ? " (slope out of range)" : " (not monotone)"));
  }
  return {ok, "K=500/2000/8000, L1=0.4 M1=0.15 calL1=0.4; " + detail};
}

Outcome determinism(const Benchmark& b, const Problem& problem) {
  RunConfig c = base_config(b);
  c.variant = Variant::Polyak;
  c.schedule.kind = ScheduleKind::PolyakExp;
  c.schedule.eta0 = kEtaGrid.front();
  c.seed = 0;
  const auto dir = std::filesystem::temp_directory_path() / "lmopt_acceptance";
  std::filesystem::create_directories(dir);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  write_trace(run(problem, c), dir / "first.csv");
  write_trace(run(problem, c), dir / "second.csv");
  const std::string a = slurp(dir / "first.csv"), d = slurp(dir / "second.csv");
  return {!a.empty() && a == d, fmt("Polyak eta0=%g seed 0, %zu-byte CSVs %s", c.schedule.eta0, a.size(),
                                    a == d ? "identical" : "differ")};
}

Outcome parser(const Benchmark& b) {
  bool ok = true;
  std::string detail;
  const Dataset back = parse_libsvm(to_libsvm(*b.data), b.data->n_features);
  const bool round_trip = back == *b.data;
  ok = ok && round_trip;
  detail += b.label + " round trip " + (round_trip ? "equal" : "DIFFERS");

  const Dataset ex = parse_libsvm("+1 1:0.5 3:-2\n-1 2:1");
  const bool example = ex.n_samples == 2 && ex.n_features == 3 &&
                       ex.features == std::vector<double>{0.5, 0, -2, 0, 1, 0} &&
                       ex.labels == std::vector<double>{1, -1};
  ok = ok && example;
  detail += example ? "; example parses" : "; example WRONG";

  struct Bad {
    const char* text;
    std::size_t line;
  };
  for (const Bad& bad : {Bad{"", 0}, Bad{"1 2:abc", 1}, Bad{"+1 1:1\n-1 3:1 2:1", 2},
                         Bad{"+1 1:1\n+1 2:2\n7 1:1", 3}, Bad{"+1 1:1 1:2", 1}}) {
    bool raised = false;
    try {
      (void)parse_libsvm(bad.text);
    } catch (const ParseError& e) {
      raised = bad.line == 0 || e.line() == bad.line;
    }
    ok = ok && raised;
    if (!raised) detail += fmt("; no/misplaced error for \"%s\"", bad.text);
  }
  detail += "; 5 malformed inputs checked";
  return {ok, detail};
}

}  // namespace

int main() {
  const auto t_all = std::chrono::steady_clock::now();
  const Benchmark b = benchmark_problem();
  const auto problem = make_problem(b.spec, b.data);

  struct Criterion {
    const char* name;
    double budget_s;  // 0: none
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"lmo correctness", 5, [] { return lmo_correctness(); }},
      {"derivative oracles", 30, [&] { return derivative_oracles(b); }},
      {"algebraic equivalences", 5, [] { return algebraic_equivalences(); }},
      {"variant ordering", 180, [&] { return variant_ordering(b, *problem); }},
      {"batch-size ordering", 180, [&] { return batch_ordering(b, *problem); }},
      {"rate shape", 120, [&] { return rate_shape(b, *problem); }},
      {"determinism", 0, [&] { return determinism(b, *problem); }},
      {"libsvm parser", 0, [&] { return parser(b); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const double budget = criteria[i].budget_s;
    if (budget > 0 && secs >= budget) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", budget);
    }
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, criteria[i].name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed (%.1f s total)\n", failed, criteria.size(), seconds_since(t_all));
  return failed == 0 ? 0 : 1;
}
