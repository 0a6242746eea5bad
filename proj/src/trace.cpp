#include "lmopt/trace.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lmopt {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, p);
}

double parse_field(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError("trace line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& trace_path) {
  return std::filesystem::path(trace_path.string() + ".json");
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : trace.rows) {
    out += std::to_string(r.k);
    for (double v : {r.loss, r.grad_l2, r.grad_dual, r.mom_err, r.step_norm, r.runmin_loss,
                     r.runmin_grad, r.wall_ms}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

Trace trace_from_csv(std::string_view text) {
  Trace t;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kTraceHeader) throw FormatError("trace header mismatch: '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    double f[9];
    std::size_t n = 0;
    while (true) {
      const auto comma = line.find(',');
      if (n == 9) throw FormatError("trace line " + std::to_string(line_no) + ": too many fields");
      f[n++] = parse_field(line.substr(0, comma), line_no);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (n != 9) throw FormatError("trace line " + std::to_string(line_no) + ": expected 9 fields");
    TraceRow r;
    r.k = static_cast<std::size_t>(f[0]);
    r.loss = f[1];
    r.grad_l2 = f[2];
    r.grad_dual = f[3];
    r.mom_err = f[4];
    r.step_norm = f[5];
    r.runmin_loss = f[6];
    r.runmin_grad = f[7];
    r.wall_ms = f[8];
    t.rows.push_back(r);
  }
  if (!header_seen) throw FormatError("trace is empty (missing header)");
  return t;
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace '" + path.string() + "'");
    out << trace_to_csv(trace);
    if (!out) throw std::runtime_error("write failed for trace '" + path.string() + "'");
  }
  nlohmann::json side;
  side["config"] = trace.config ? to_json(*trace.config) : nlohmann::json(nullptr);
  side["status"] = trace.diverged_at
                       ? nlohmann::json{{"diverged", true},
                                        {"diverged_at", *trace.diverged_at},
                                        {"message", trace.divergence_message}}
                       : nlohmann::json{{"diverged", false}};
  const auto sp = sidecar_path(path);
  std::ofstream js(sp);
  if (!js) throw std::runtime_error("cannot write sidecar '" + sp.string() + "'");
  js << side.dump(2) << '\n';
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Trace t;
  try {
    t = trace_from_csv(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  const auto sp = sidecar_path(path);
  std::ifstream js(sp);
  if (!js) {
    std::cerr << "warning: no sidecar '" << sp.string() << "'; config unknown\n";
    return t;
  }
  try {
    nlohmann::json side;
    js >> side;
    if (side.contains("config") && !side.at("config").is_null())
      t.config = run_config_from_json(side.at("config"));
    if (side.contains("status") && side.at("status").value("diverged", false)) {
      t.diverged_at = side.at("status").at("diverged_at").get<std::size_t>();
      t.divergence_message = side.at("status").value("message", std::string());
    }
  } catch (const std::exception& e) {
    throw FormatError(sp.string() + ": " + e.what());
  }
  return t;
}

}  // namespace lmopt
