#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmopt/compare.hpp"
#include "lmopt/errors.hpp"
#include "lmopt/runner.hpp"
#include "lmopt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct RunFlags {
  std::string config_path;
  std::string problem = "logreg";
  std::string data;
  bool synthetic = false;
  std::size_t syn_samples = 1000, syn_features = 60;
  std::uint64_t data_seed = 0;
  std::string norm = "l2";
  std::string variant = "som-v2";
  std::string schedule;
  double eta0 = 0.1;
  std::string beta = "auto";
  std::size_t batch = 1, iters = 1000, eval_every = 10;
  bool full_batch = false;
  std::uint64_t seed = 0;
  std::string out;
  bool timing = false;
  double lambda = 0.01;
  std::vector<std::size_t> hidden{32, 16};
  std::string activation = "tanh";
  std::string mars_anchor = "new";
  std::string m0 = "gradient";
  std::optional<double> L0, L1, M0, M1, calL0, calL1;
};

lmopt::RunConfig config_from_flags(const RunFlags& f, const CLI::App& app) {
  using namespace lmopt;
  RunConfig c;
  if (!f.config_path.empty()) {
    c = load_run_config(f.config_path);
    // Explicit flags override the file.
    if (app.count("--out")) c.out = f.out;
    if (app.count("--seed")) c.seed = f.seed;
    if (app.count("--iters")) c.iters = f.iters;
    if (app.count("--timing")) c.record_wall_clock = true;
    return c;
  }
  c.problem.kind = parse_problem_kind(f.problem);
  c.problem.lambda = f.lambda;
  if (f.hidden.size() != 2) throw ConfigError("--hidden takes exactly two widths");
  c.problem.hidden1 = f.hidden[0];
  c.problem.hidden2 = f.hidden[1];
  c.problem.activation = parse_activation(f.activation);
  if (!f.data.empty()) c.problem.data_path = f.data;
  if (f.synthetic) c.problem.synthetic = SyntheticSpec{f.syn_samples, f.syn_features, f.data_seed};
  c.norm.kind = parse_norm_kind(f.norm);
  c.variant = parse_variant(f.variant);
  c.schedule.kind = f.schedule.empty() ? default_schedule_for(c.variant) : parse_schedule_kind(f.schedule);
  c.schedule.eta0 = f.eta0;
  if (f.variant == "storm" && f.beta != "auto") throw ConfigError("storm fixes beta = 1 - alpha; drop --beta");
  if (f.beta == "auto") {
    c.schedule.beta_rule = BetaOneMinusAlpha{};
  } else {
    try {
      c.schedule.beta_rule = BetaConstant{std::stod(f.beta)};
    } catch (const std::logic_error&) {
      throw ConfigError("--beta expects a number or 'auto', got '" + f.beta + "'");
    }
  }
  auto& s = c.schedule.smoothness;
  s.L0 = f.L0.value_or(0.0);
  s.L1 = f.L1.value_or(0.0);
  s.M0 = f.M0.value_or(0.0);
  s.M1 = f.M1.value_or(0.0);
  s.calL0 = f.calL0.value_or(0.0);
  s.calL1 = f.calL1.value_or(0.0);
  c.batch_size = f.batch;
  c.full_batch = f.full_batch;
  c.iters = f.iters;
  c.eval_every = f.eval_every;
  c.seed = f.seed;
  c.out = f.out;
  c.record_wall_clock = f.timing;
  c.mars_anchor = parse_mars_anchor(f.mars_anchor);
  if (f.m0 == "gradient")
    c.m0 = MomentumInit::Gradient;
  else if (f.m0 == "zero")
    c.m0 = MomentumInit::Zero;
  else
    throw ConfigError("--m0 expects gradient|zero, got '" + f.m0 + "'");
  return c;
}

int cmd_run(const RunFlags& flags, const CLI::App& app) {
  const lmopt::RunConfig cfg = config_from_flags(flags, app);
  cfg.validate();
  const lmopt::Trace trace = lmopt::run(cfg);
  if (!cfg.out.empty()) {
    lmopt::write_trace(trace, cfg.out);
  } else {
    std::cout << lmopt::trace_to_csv(trace);
  }
  if (trace.diverged_at) {
    std::cerr << trace.divergence_message << "\n";
    return kExitDiverged;
  }
  if (!trace.rows.empty()) {
    const auto& last = trace.rows.back();
    std::cerr << "done: k=" << last.k << " runmin_loss=" << last.runmin_loss << " runmin_grad=" << last.runmin_grad
              << "\n";
  }
  return kExitOk;
}

int cmd_compare(const std::string& metric, const std::vector<std::string>& paths) {
  std::vector<lmopt::NamedTrace> traces;
  for (const auto& p : paths) traces.push_back({p, lmopt::read_trace(p)});
  const auto cmp = lmopt::compare_runs(traces, lmopt::parse_metric(metric));
  std::cout << lmopt::format_comparison(cmp);
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, bool quick) {
  lmopt::VerifyOptions opt;
  opt.seed = seed;
  if (quick) {
    opt.derivative_points = 10;
    opt.lmo_triples = 100;
    opt.lmo_samples = 200;
  }
  const auto report = lmopt::run_verify_suite(opt);
  std::cout << report.dump(2) << "\n";
  return report.at("passed").get<bool>() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMO-based stochastic optimizers with momentum"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run one optimizer and write a CSV trace");
  run->add_option("--config", rf.config_path, "JSON run config (other flags except --out/--seed/--iters ignored)");
  run->add_option("--problem", rf.problem, "logreg|mlp");
  run->add_option("--data", rf.data, "libsvm file (relative paths also tried under $LMOPT_DATA_DIR)");
  run->add_flag("--synthetic", rf.synthetic, "Use a generated dataset instead of a file");
  run->add_option("--samples", rf.syn_samples, "Synthetic sample count");
  run->add_option("--features", rf.syn_features, "Synthetic feature count");
  run->add_option("--data-seed", rf.data_seed, "Synthetic data seed");
  run->add_option("--lambda", rf.lambda, "Welsch regularizer weight");
  run->add_option("--hidden", rf.hidden, "MLP hidden widths")->expected(2);
  run->add_option("--activation", rf.activation, "tanh|sigmoid");
  run->add_option("--norm", rf.norm, "l2|linf|l1");
  run->add_option("--variant", rf.variant, "polyak|igt|mars|storm|som-v1|som-v2");
  run->add_option("--schedule", rf.schedule, "Schedule kind (default: matches the variant)");
  run->add_option("--eta0", rf.eta0, "Base step size");
  run->add_option("--beta", rf.beta, "Constant beta or 'auto' (1 - alpha)");
  run->add_option("--batch", rf.batch, "Mini-batch size");
  run->add_flag("--full-batch", rf.full_batch, "Deterministic full-batch oracles");
  run->add_option("--iters", rf.iters, "Iterations");
  run->add_option("--eval-every", rf.eval_every, "Trace row interval");
  run->add_option("--seed", rf.seed, "Run seed");
  run->add_option("--out", rf.out, "Trace CSV path (stdout if omitted)");
  run->add_flag("--timing", rf.timing, "Record wall-clock milliseconds");
  run->add_option("--mars-anchor", rf.mars_anchor, "new|old");
  run->add_option("--m0", rf.m0, "gradient|zero");
  run->add_option("--L0", rf.L0, "Gradient smoothness, constant part (theorem schedules)");
  run->add_option("--L1", rf.L1, "Gradient smoothness, gradient-norm part");
  run->add_option("--M0", rf.M0, "Hessian smoothness, constant part");
  run->add_option("--M1", rf.M1, "Hessian smoothness, gradient-norm part");
  run->add_option("--calL0", rf.calL0, "Mean-squared smoothness, constant part");
  run->add_option("--calL1", rf.calL1, "Mean-squared smoothness, gradient-norm part");

  std::string metric = "loss";
  std::vector<std::string> trace_paths;
  auto* compare = app.add_subcommand("compare", "Rank traces by final running minimum");
  compare->add_option("--metric", metric, "loss|grad");
  compare->add_option("traces", trace_paths, "Trace CSV files")->required();

  std::uint64_t verify_seed = 0;
  bool verify_quick = false;
  auto* verify = app.add_subcommand("verify", "Run the verification suite and print a JSON report");
  verify->add_option("--seed", verify_seed);
  verify->add_flag("--quick", verify_quick, "Fewer sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(rf, *run);
    if (*compare) return cmd_compare(metric, trace_paths);
    if (*verify) return cmd_verify(verify_seed, verify_quick);
  } catch (const lmopt::DivergenceError& e) {
    std::cerr << e.what() << "\n";
    return kExitDiverged;
  } catch (const lmopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lmopt::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lmopt::FormatError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitOk;
}
