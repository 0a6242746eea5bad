#include "lmopt/compare.hpp"

#include <iomanip>
#include <sstream>

namespace lmopt {

Metric parse_metric(std::string_view name) {
  if (name == "loss") return Metric::Loss;
  if (name == "grad") return Metric::Grad;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected loss|grad)");
}

std::string_view to_string(Metric m) { return m == Metric::Loss ? "loss" : "grad"; }

Comparison compare_runs(std::span<const NamedTrace> traces, Metric metric) {
  if (traces.size() < 2) throw ConfigError("compare needs at least two traces");
  const auto& ref = traces.front().trace.rows;
  if (ref.empty()) throw ConfigError("compare: trace '" + traces.front().name + "' has no rows");
  for (const auto& t : traces) {
    const auto& rows = t.trace.rows;
    bool same = rows.size() == ref.size();
    for (std::size_t i = 0; same && i < rows.size(); ++i) same = rows[i].k == ref[i].k;
    if (!same) throw ConfigError("compare: trace '" + t.name + "' has a different k grid");
  }

  auto value = [metric](const TraceRow& r) { return metric == Metric::Loss ? r.runmin_loss : r.runmin_grad; };

  Comparison c;
  c.metric = metric;
  for (const auto& t : traces) {
    const auto& rows = t.trace.rows;
    RunSummary s;
    s.name = t.name;
    s.final_runmin = value(rows.back());
    for (std::size_t i = 1; i < rows.size(); ++i)
      s.auc += 0.5 * (value(rows[i]) + value(rows[i - 1])) * static_cast<double>(rows[i].k - rows[i - 1].k);
    c.runs.push_back(s);
  }
  for (std::size_t i = 0; i < c.runs.size(); ++i)
    for (std::size_t j = i + 1; j < c.runs.size(); ++j)
      c.pairs.push_back({i, j, c.runs[i].final_runmin - c.runs[j].final_runmin});
  return c;
}

std::string format_comparison(const Comparison& c) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "metric: running-min " << to_string(c.metric) << "\n";
  os << std::left << std::setw(32) << "run" << std::setw(16) << "final" << "auc\n";
  for (const auto& r : c.runs) os << std::setw(32) << r.name << std::setw(16) << r.final_runmin << r.auc << "\n";
  os << "\npairwise (final[a] - final[b]):\n";
  for (const auto& p : c.pairs) {
    const char* rel = p.diff < 0 ? "<" : (p.diff > 0 ? ">" : "=");
    os << "  " << c.runs[p.first].name << " " << rel << " " << c.runs[p.second].name << "  (" << p.diff << ")\n";
  }
  return os.str();
}

}  // namespace lmopt
