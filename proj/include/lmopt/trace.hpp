#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lmopt/config.hpp"

namespace lmopt {

inline constexpr const char* kTraceHeader =
    "k,loss,grad_l2,grad_dual,mom_err,step_norm,runmin_loss,runmin_grad,wall_ms";

/// Full-batch metrics at x_k. step_norm is ||lmo(m_k)||, the step taken from x_k
/// (0 on the final row). runmin_grad tracks grad_dual.
struct TraceRow {
  std::size_t k = 0;
  double loss = 0.0;
  double grad_l2 = 0.0;
  double grad_dual = 0.0;
  double mom_err = 0.0;
  double step_norm = 0.0;
  double runmin_loss = 0.0;
  double runmin_grad = 0.0;
  double wall_ms = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::optional<RunConfig> config;       // resolved config, from the JSON sidecar
  std::optional<std::size_t> diverged_at;
  std::string divergence_message;
  ParamVector final_x;                   // in-memory only
};

/// CSV body with 17 significant digits per float.
std::string trace_to_csv(const Trace& trace);
Trace trace_from_csv(std::string_view text);

/// Writes `path` and the sidecar `path + ".json"` (config + status).
void write_trace(const Trace& trace, const std::filesystem::path& path);
/// A missing sidecar is reported on stderr; the rows are still returned.
Trace read_trace(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& trace_path);

}  // namespace lmopt
