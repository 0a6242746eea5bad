#include "lmopt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "lmopt/errors.hpp"
#include "lmopt/sampling.hpp"

namespace lmopt {

namespace {

struct SparseRow {
  double label;
  std::vector<std::pair<std::size_t, double>> entries;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

double map_label(std::string_view tok, std::size_t line) {
  double v = 0.0;
  if (!parse_double(tok, v)) throw ParseError(line, "malformed label '" + std::string(tok) + "'");
  if (v == 1.0) return 1.0;
  if (v == -1.0 || v == 0.0) return -1.0;
  throw ParseError(line, "unmappable label '" + std::string(tok) + "' (expected -1/+1 or 0/1)");
}

SparseRow parse_line(std::string_view body, std::size_t line) {
  SparseRow row{};
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string_view {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
    const auto start = pos;
    while (pos < body.size() && body[pos] != ' ' && body[pos] != '\t') ++pos;
    return body.substr(start, pos - start);
  };

  row.label = map_label(next_token(), line);
  std::size_t last_index = 0;
  for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line, "expected idx:val, got '" + std::string(tok) + "'");
    const auto idx_tok = tok.substr(0, colon);
    const auto val_tok = tok.substr(colon + 1);
    std::size_t idx = 0;
    auto [p, ec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
    if (ec != std::errc() || p != idx_tok.data() + idx_tok.size() || idx == 0)
      throw ParseError(line, "malformed index '" + std::string(idx_tok) + "'");
    if (idx <= last_index)
      throw ParseError(line, "indices must be strictly increasing (" + std::to_string(idx) +
                                 " after " + std::to_string(last_index) + ")");
    double val = 0.0;
    if (!parse_double(val_tok, val))
      throw ParseError(line, "malformed value '" + std::string(val_tok) + "'");
    row.entries.emplace_back(idx, val);
    last_index = idx;
  }
  return row;
}

}  // namespace

void Dataset::validate() const {
  if (n_samples == 0) throw ConfigError("dataset: no samples");
  if (n_features == 0) throw ConfigError("dataset: no features");
  if (features.size() != n_samples * n_features || labels.size() != n_samples)
    throw ConfigError("dataset: storage does not match n_samples x n_features");
  for (double y : labels)
    if (y != 1.0 && y != -1.0) throw ConfigError("dataset: label outside {-1,+1}");
  for (double v : features)
    if (!std::isfinite(v)) throw NonFiniteError("dataset: non-finite feature");
}

Dataset parse_libsvm(std::string_view text, std::optional<std::size_t> n_features) {
  std::vector<SparseRow> rows;
  std::size_t max_index = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto row = parse_line(line, line_no);
    if (!row.entries.empty()) max_index = std::max(max_index, row.entries.back().first);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "no samples");

  Dataset d;
  d.n_samples = rows.size();
  d.n_features = max_index;
  if (n_features) {
    if (*n_features < max_index)
      throw ParseError(0, "feature index " + std::to_string(max_index) + " exceeds n_features=" +
                              std::to_string(*n_features));
    d.n_features = *n_features;
  }
  if (d.n_features == 0) throw ParseError(0, "no features");

  d.features.assign(d.n_samples * d.n_features, 0.0);
  d.labels.resize(d.n_samples);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.labels[i] = rows[i].label;
    for (auto [idx, val] : rows[i].entries) d.features[i * d.n_features + idx - 1] = val;
  }
  return d;
}

Dataset load_libsvm_file(const std::filesystem::path& path, std::optional<std::size_t> n_features) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_libsvm(ss.str(), n_features);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

std::string to_libsvm(const Dataset& data) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    out += data.labels[i] > 0 ? "+1" : "-1";
    const auto r = data.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] == 0.0) continue;
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r[j]);
      out += ' ';
      out += std::to_string(j + 1);
      out += ':';
      out.append(buf, p);
    }
    out += '\n';
  }
  return out;
}

Dataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, std::uint64_t seed) {
  if (n_samples == 0 || n_features == 0) throw ConfigError("synthetic dataset needs N >= 1 and d >= 1");
  Rng rng = make_stream(seed, StreamTag::Data);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> planted(n_features);
  const double scale = 2.0 / std::sqrt(static_cast<double>(n_features));
  for (auto& w : planted) w = scale * normal(rng);

  Dataset d;
  d.n_samples = n_samples;
  d.n_features = n_features;
  d.features.resize(n_samples * n_features);
  d.labels.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double margin = 0.0;
    for (std::size_t j = 0; j < n_features; ++j) {
      const double a = normal(rng);
      d.features[i * n_features + j] = a;
      margin += a * planted[j];
    }
    const double p = 1.0 / (1.0 + std::exp(-margin));
    d.labels[i] = unif(rng) < p ? 1.0 : -1.0;
  }
  return d;
}

}  // namespace lmopt
