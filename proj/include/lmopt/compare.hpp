#pragma once

#include <span>
#include <string>
#include <vector>

#include "lmopt/trace.hpp"

namespace lmopt {

enum class Metric { Loss, Grad };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric m);

struct NamedTrace {
  std::string name;
  Trace trace;
};

struct RunSummary {
  std::string name;
  double final_runmin = 0.0;
  double auc = 0.0;  // trapezoidal area under the running-min curve over k
};

struct PairOrdering {
  std::size_t first = 0;
  std::size_t second = 0;
  double diff = 0.0;  // final_runmin[first] - final_runmin[second]
};

struct Comparison {
  Metric metric = Metric::Loss;
  std::vector<RunSummary> runs;
  std::vector<PairOrdering> pairs;
};

/// Requires >= 2 traces sharing the same k grid.
Comparison compare_runs(std::span<const NamedTrace> traces, Metric metric);

std::string format_comparison(const Comparison& c);

}  // namespace lmopt
