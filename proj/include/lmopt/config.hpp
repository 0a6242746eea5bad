#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "lmopt/dataset.hpp"
#include "lmopt/mlp.hpp"
#include "lmopt/momentum.hpp"
#include "lmopt/norms.hpp"
#include "lmopt/problem.hpp"
#include "lmopt/schedules.hpp"

namespace lmopt {

/// Environment variable naming the directory searched for relative dataset
/// paths and for the default "splice" file.
inline constexpr const char* kDataDirEnv = "LMOPT_DATA_DIR";

enum class ProblemKind { LogReg, Mlp };

struct SyntheticSpec {
  std::size_t samples = 1000;
  std::size_t features = 60;
  std::uint64_t seed = 0;
  bool operator==(const SyntheticSpec&) const = default;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::LogReg;
  std::optional<std::string> data_path;
  std::optional<SyntheticSpec> synthetic;
  double lambda = 0.01;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 16;
  Activation activation = Activation::Tanh;
  bool operator==(const ProblemSpec&) const = default;
};

enum class MomentumInit { Gradient, Zero };

struct RunConfig {
  ProblemSpec problem{};
  NormSpec norm{};
  Variant variant = Variant::SOMv2;
  Schedule schedule{};
  std::size_t batch_size = 1;
  bool full_batch = false;  // every oracle call uses all N samples; batch_size is ignored
  std::size_t iters = 1000;
  std::uint64_t seed = 0;
  std::size_t eval_every = 10;
  MomentumInit m0 = MomentumInit::Gradient;
  MarsAnchor mars_anchor = MarsAnchor::New;
  bool record_wall_clock = false;
  std::optional<double> som_pinned_b;  // test hook
  bool mutate_beta = false;            // test hook, never serialized
  std::string out;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Fills run-dependent schedule fields: horizon K = iters - 1 for theorem
/// kinds, and norm-equivalence constants from (norm, dim) when unset.
RunConfig resolve_config(RunConfig config, std::size_t dim);

std::string_view to_string(ProblemKind k);
ProblemKind parse_problem_kind(std::string_view name);

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Resolves spec.data_path (relative paths also tried under $LMOPT_DATA_DIR),
/// the synthetic generator, or $LMOPT_DATA_DIR/splice, in that order.
std::shared_ptr<const Dataset> load_dataset(const ProblemSpec& spec);

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec, std::shared_ptr<const Dataset> data,
                                      ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace lmopt
