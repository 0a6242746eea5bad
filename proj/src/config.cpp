#include "lmopt/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lmopt/logreg.hpp"

namespace lmopt {

using nlohmann::json;

std::string_view to_string(ProblemKind k) { return k == ProblemKind::LogReg ? "logreg" : "mlp"; }

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "logreg") return ProblemKind::LogReg;
  if (name == "mlp") return ProblemKind::Mlp;
  throw ConfigError("unknown problem '" + std::string(name) + "' (expected logreg|mlp)");
}

void RunConfig::validate() const {
  if (iters < 1) throw ConfigError("iters must be >= 1");
  if (batch_size < 1) throw ConfigError("batch must be >= 1");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (!(problem.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (problem.kind == ProblemKind::Mlp && (problem.hidden1 == 0 || problem.hidden2 == 0))
    throw ConfigError("mlp hidden widths must be >= 1");
  if (som_pinned_b && !(*som_pinned_b >= 0.0 && *som_pinned_b <= 1.0))
    throw ConfigError("som_pinned_b must lie in [0, 1]");
  schedule.validate();
  const StepCoeffs c0 = coeffs_at(schedule, 0);
  c0.validate();
  if (variant == Variant::MARS && c0.alpha >= 1.0 && c0.beta != 0.0)
    throw ConfigError("mars: beta must be 0 when alpha_0 = 1 (beta/(1-alpha) undefined)");
}

RunConfig resolve_config(RunConfig c, std::size_t dim) {
  if (is_theorem_kind(c.schedule.kind)) c.schedule.horizon = c.iters - 1;
  if (!c.schedule.smoothness.norm_equiv)
    c.schedule.smoothness.norm_equiv = default_equiv_constants(c.norm, dim);
  return c;
}

namespace {

json equiv_to_json(const NormEquivConstants& e) {
  return {{"rho_lower", e.rho_lower}, {"rho_upper", e.rho_upper},
          {"theta_lower", e.theta_lower}, {"theta_upper", e.theta_upper}};
}

json schedule_to_json(const Schedule& s) {
  const auto& m = s.smoothness;
  json sm = {{"L0", m.L0},       {"L1", m.L1},       {"M0", m.M0},
             {"M1", m.M1},       {"calL0", m.calL0}, {"calL1", m.calL1},
             {"sigma_g", m.sigma_g}, {"sigma_H", m.sigma_H}};
  sm["norm_equiv"] = m.norm_equiv ? equiv_to_json(*m.norm_equiv) : json(nullptr);
  json j = {{"kind", to_string(s.kind)}, {"eta0", s.eta0},   {"horizon", s.horizon},
            {"const_alpha", s.const_alpha}, {"smoothness", sm}};
  if (std::holds_alternative<BetaOneMinusAlpha>(s.beta_rule))
    j["beta"] = "auto";
  else
    j["beta"] = std::get<BetaConstant>(s.beta_rule).value;
  return j;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  s.kind = parse_schedule_kind(j.value("kind", std::string(to_string(s.kind))));
  s.eta0 = j.value("eta0", s.eta0);
  s.horizon = j.value("horizon", s.horizon);
  s.const_alpha = j.value("const_alpha", s.const_alpha);
  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    if (b.is_string()) {
      if (b.get<std::string>() != "auto") throw ConfigError("beta must be a number or \"auto\"");
      s.beta_rule = BetaOneMinusAlpha{};
    } else {
      s.beta_rule = BetaConstant{b.get<double>()};
    }
  }
  if (j.contains("smoothness")) {
    const auto& m = j.at("smoothness");
    auto& o = s.smoothness;
    o.L0 = m.value("L0", 0.0);
    o.L1 = m.value("L1", 0.0);
    o.M0 = m.value("M0", 0.0);
    o.M1 = m.value("M1", 0.0);
    o.calL0 = m.value("calL0", 0.0);
    o.calL1 = m.value("calL1", 0.0);
    o.sigma_g = m.value("sigma_g", 0.0);
    o.sigma_H = m.value("sigma_H", 0.0);
    if (m.contains("norm_equiv") && !m.at("norm_equiv").is_null()) {
      const auto& e = m.at("norm_equiv");
      o.norm_equiv = NormEquivConstants{e.at("rho_lower").get<double>(), e.at("rho_upper").get<double>(),
                                        e.at("theta_lower").get<double>(),
                                        e.at("theta_upper").get<double>()};
    }
  }
  return s;
}

}  // namespace

json to_json(const RunConfig& c) {
  json problem = {{"kind", to_string(c.problem.kind)},
                  {"lambda", c.problem.lambda},
                  {"hidden", {c.problem.hidden1, c.problem.hidden2}},
                  {"activation", to_string(c.problem.activation)}};
  problem["data"] = c.problem.data_path ? json(*c.problem.data_path) : json(nullptr);
  if (c.problem.synthetic)
    problem["synthetic"] = {{"samples", c.problem.synthetic->samples},
                            {"features", c.problem.synthetic->features},
                            {"seed", c.problem.synthetic->seed}};
  else
    problem["synthetic"] = nullptr;

  json j = {{"problem", problem},
            {"norm", to_string(c.norm.kind)},
            {"variant", to_string(c.variant)},
            {"schedule", schedule_to_json(c.schedule)},
            {"batch", c.batch_size},
            {"full_batch", c.full_batch},
            {"iters", c.iters},
            {"seed", c.seed},
            {"eval_every", c.eval_every},
            {"m0", c.m0 == MomentumInit::Gradient ? "gradient" : "zero"},
            {"mars_anchor", to_string(c.mars_anchor)},
            {"timing", c.record_wall_clock},
            {"out", c.out}};
  j["som_pinned_b"] = c.som_pinned_b ? json(*c.som_pinned_b) : json(nullptr);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    if (j.contains("problem")) {
      const auto& p = j.at("problem");
      c.problem.kind = parse_problem_kind(p.value("kind", std::string("logreg")));
      c.problem.lambda = p.value("lambda", c.problem.lambda);
      if (p.contains("data") && !p.at("data").is_null()) c.problem.data_path = p.at("data").get<std::string>();
      if (p.contains("synthetic") && !p.at("synthetic").is_null()) {
        const auto& s = p.at("synthetic");
        SyntheticSpec syn;
        syn.samples = s.value("samples", syn.samples);
        syn.features = s.value("features", syn.features);
        syn.seed = s.value("seed", syn.seed);
        c.problem.synthetic = syn;
      }
      if (p.contains("hidden")) {
        const auto h = p.at("hidden").get<std::vector<std::size_t>>();
        if (h.size() != 2) throw ConfigError("problem.hidden must list exactly two widths");
        c.problem.hidden1 = h[0];
        c.problem.hidden2 = h[1];
      }
      c.problem.activation = parse_activation(p.value("activation", std::string("tanh")));
    }
    const std::string variant = j.value("variant", std::string(to_string(c.variant)));
    c.variant = parse_variant(variant);
    c.norm.kind = parse_norm_kind(j.value("norm", std::string("l2")));
    c.schedule.kind = default_schedule_for(c.variant);
    if (j.contains("schedule")) {
      json sj = j.at("schedule");
      if (!sj.contains("kind")) sj["kind"] = to_string(default_schedule_for(c.variant));
      c.schedule = schedule_from_json(sj);
    }
    if (variant == "storm") c.schedule.beta_rule = BetaOneMinusAlpha{};
    c.batch_size = j.value("batch", c.batch_size);
    c.full_batch = j.value("full_batch", c.full_batch);
    c.iters = j.value("iters", c.iters);
    c.seed = j.value("seed", c.seed);
    c.eval_every = j.value("eval_every", c.eval_every);
    const std::string m0 = j.value("m0", std::string("gradient"));
    if (m0 != "gradient" && m0 != "zero") throw ConfigError("m0 must be \"gradient\" or \"zero\"");
    c.m0 = m0 == "gradient" ? MomentumInit::Gradient : MomentumInit::Zero;
    c.mars_anchor = parse_mars_anchor(j.value("mars_anchor", std::string("new")));
    c.record_wall_clock = j.value("timing", false);
    if (j.contains("som_pinned_b") && !j.at("som_pinned_b").is_null())
      c.som_pinned_b = j.at("som_pinned_b").get<double>();
    c.out = j.value("out", std::string());
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return run_config_from_json(j);
}

std::shared_ptr<const Dataset> load_dataset(const ProblemSpec& spec) {
  namespace fs = std::filesystem;
  const char* env = std::getenv(kDataDirEnv);
  if (spec.data_path) {
    fs::path p(*spec.data_path);
    if (!fs::exists(p) && p.is_relative() && env) p = fs::path(env) / p;
    if (!fs::exists(p)) throw ConfigError("dataset not found: " + *spec.data_path);
    return std::make_shared<const Dataset>(load_libsvm_file(p));
  }
  if (spec.synthetic)
    return std::make_shared<const Dataset>(
        synthesize_dataset(spec.synthetic->samples, spec.synthetic->features, spec.synthetic->seed));
  if (env && fs::exists(fs::path(env) / "splice"))
    return std::make_shared<const Dataset>(load_libsvm_file(fs::path(env) / "splice"));
  throw ConfigError(std::string("no dataset: pass --data, --synthetic, or set ") + kDataDirEnv +
                    " to a directory containing 'splice'");
}

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec, std::shared_ptr<const Dataset> data,
                                      ExecPolicy policy) {
  if (spec.kind == ProblemKind::LogReg) return std::make_unique<LogRegWelsch>(std::move(data), spec.lambda, policy);
  MlpArchitecture arch;
  arch.inputs = data->n_features;
  arch.hidden1 = spec.hidden1;
  arch.hidden2 = spec.hidden2;
  arch.activation = spec.activation;
  return std::make_unique<MlpWelsch>(std::move(data), arch, spec.lambda, policy);
}

}  // namespace lmopt
