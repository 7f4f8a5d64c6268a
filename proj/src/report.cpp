// Copyright 2026 The wsharp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wsharp/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "wsharp/error.hpp"
#include "wsharp/json_io.hpp"

namespace wsharp {

using ojson = nlohmann::ordered_json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "certified-empirical";
    case Verdict::Refuted:
      return "refuted-on-grid";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "certified-empirical") return Verdict::Certified;
  if (s == "refuted-on-grid") return Verdict::Refuted;
  if (s == "inconclusive") return Verdict::Inconclusive;
  throw Error(ErrorCode::Parse, "unknown verdict \"" + s + "\"");
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return 0;
    case Verdict::Refuted:
      return 2;
    case Verdict::Inconclusive:
      return 3;
  }
  return 3;
}

std::optional<double> CertificateReport::diagnostic(
    const std::string& name) const {
  for (const auto& [k, v] : diagnostics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

namespace {

std::string format_with(const char* fmt, double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

// Non-finite values travel as strings so the output stays valid JSON.
ojson num(double x) {
  if (std::isfinite(x)) return x;
  return format_with("%.17g", x);
}

ojson opt(const std::optional<double>& x) {
  return x ? num(*x) : ojson(nullptr);
}

ojson vec(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

double read_num(const ojson& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::Parse, "report: " + where + " is not a number");
}

std::optional<double> read_opt(const ojson& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  return read_num(j, where);
}

std::vector<double> read_vec(const ojson& j, const std::string& where) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(read_num(x, where));
  return v;
}

void write_json(std::string& out, const ojson& j, int indent, int depth) {
  const std::string pad =
      indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ')
                 : "";
  const std::string close =
      indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ')
                 : "";
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad;
        out += ojson(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write_json(out, it.value(), indent, depth + 1);
      }
      out += close + '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays (points) stay on one line.
      bool flat = true;
      for (const auto& x : j) flat = flat && !x.is_structured();
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += pad;
        write_json(out, x, indent, depth + 1);
      }
      out += (flat ? "" : close) + ']';
      return;
    }
    case ojson::value_t::number_float:
      out += format_with("%.17g", j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_g17(const ojson& j, int indent) {
  std::string out;
  write_json(out, j, indent, 0);
  return out;
}

std::string format_g17(double x) { return format_with("%.17g", x); }
std::string format_g6(double x) { return format_with("%.6g", x); }

std::string report_to_json(const CertificateReport& r, int indent) {
  ojson j;
  j["kind"] = r.kind;
  j["condition"] = r.condition;
  j["verdict"] = to_string(r.verdict);
  j["mode"] = r.mode;
  j["inf_f_hat"] = num(r.inf_f_hat);
  j["argmin_count"] = r.argmin_count;
  ojson am = ojson::array();
  for (const auto& p : r.argmin_points) am.push_back(vec(p));
  j["argmin_points"] = am;
  j["tau"] = {{"sharp_inner", opt(r.tau_sharp)}, {"sound_outer", opt(r.tau_sound)}};
  j["zeta"] = {{"sharp_inner", opt(r.zeta_sharp)},
               {"sound_outer", opt(r.zeta_sound)}};
  j["sigma_checked"] = opt(r.sigma_checked);
  j["sigma_hat"] = opt(r.sigma_hat);
  j["lipschitz"] = opt(r.lipschitz);
  j["lipschitz_source"] = r.lipschitz_source;
  j["lambda"] = opt(r.lambda);
  j["violation_count"] = r.violation_count;
  ojson vs = ojson::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"point", vec(v.point)}, {"lhs", num(v.lhs)}, {"rhs", num(v.rhs)}});
  }
  j["violations"] = vs;
  ojson ss = ojson::array();
  for (const auto& s : r.samples) {
    ss.push_back({{"point", vec(s.point)}, {"value", num(s.value)}});
  }
  j["samples"] = ss;
  ojson d = ojson::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = num(v);
  j["diagnostics"] = d;
  j["notes"] = r.notes;
  ojson m;
  m["backend"] = r.backend;
  m["seed"] = r.seed;
  m["dim"] = r.dim;
  m["resolution"] = r.resolution;
  m["grid_points"] = r.grid_points;
  m["box"] = {{"lo", vec(r.box_lo)}, {"hi", vec(r.box_hi)}};
  m["approx_geometry"] = r.approx_geometry;
  m["disclaimer"] = r.disclaimer;
  if (r.runtime_ms) m["runtime_ms"] = num(*r.runtime_ms);
  j["metadata"] = m;

  return dump_g17(j, indent) + '\n';
}

CertificateReport report_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
  }
  try {
    CertificateReport r;
    r.kind = j.at("kind").get<std::string>();
    r.condition = j.at("condition").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.mode = j.at("mode").get<std::string>();
    r.inf_f_hat = read_num(j.at("inf_f_hat"), "inf_f_hat");
    r.argmin_count = j.at("argmin_count").get<std::size_t>();
    for (const auto& p : j.at("argmin_points")) {
      r.argmin_points.push_back(read_vec(p, "argmin_points"));
    }
    r.tau_sharp = read_opt(j.at("tau").at("sharp_inner"), "tau");
    r.tau_sound = read_opt(j.at("tau").at("sound_outer"), "tau");
    r.zeta_sharp = read_opt(j.at("zeta").at("sharp_inner"), "zeta");
    r.zeta_sound = read_opt(j.at("zeta").at("sound_outer"), "zeta");
    r.sigma_checked = read_opt(j.at("sigma_checked"), "sigma_checked");
    r.sigma_hat = read_opt(j.at("sigma_hat"), "sigma_hat");
    r.lipschitz = read_opt(j.at("lipschitz"), "lipschitz");
    r.lipschitz_source = j.at("lipschitz_source").get<std::string>();
    r.lambda = read_opt(j.at("lambda"), "lambda");
    r.violation_count = j.at("violation_count").get<std::size_t>();
    for (const auto& v : j.at("violations")) {
      r.violations.push_back({read_vec(v.at("point"), "violation"),
                              read_num(v.at("lhs"), "lhs"),
                              read_num(v.at("rhs"), "rhs")});
    }
    for (const auto& s : j.at("samples")) {
      r.samples.push_back(
          {read_vec(s.at("point"), "sample"), read_num(s.at("value"), "value")});
    }
    for (auto it = j.at("diagnostics").begin(); it != j.at("diagnostics").end();
         ++it) {
      r.diagnostics.emplace_back(it.key(), read_num(it.value(), it.key()));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    const auto& m = j.at("metadata");
    r.backend = m.at("backend").get<std::string>();
    r.seed = m.at("seed").get<std::uint64_t>();
    r.dim = m.at("dim").get<int>();
    r.resolution = m.at("resolution").get<int>();
    r.grid_points = m.at("grid_points").get<std::size_t>();
    r.box_lo = read_vec(m.at("box").at("lo"), "box");
    r.box_hi = read_vec(m.at("box").at("hi"), "box");
    r.approx_geometry = m.at("approx_geometry").get<bool>();
    r.disclaimer = m.at("disclaimer").get<std::string>();
    if (m.contains("runtime_ms")) r.runtime_ms = read_num(m.at("runtime_ms"), "runtime_ms");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
  }
}

namespace {

std::string point_text(const std::vector<double>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += format_g6(p[i]);
  }
  return s + ")";
}

std::string opt_text(const std::optional<double>& x) {
  return x ? format_g6(*x) : "-";
}

void row(std::ostringstream& os, const char* name, const std::string& value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "  %-18s", name);
  os << buf << value << '\n';
}

}  // namespace

std::string report_to_text(const CertificateReport& r) {
  std::ostringstream os;
  os << "wsharp report: " << r.kind << '\n';
  row(os, "verdict", to_string(r.verdict));
  row(os, "condition", r.condition);
  row(os, "mode", r.mode);
  row(os, "grid", std::to_string(r.grid_points) + " points, " +
                      std::to_string(r.resolution) + " per axis, box " +
                      point_text(r.box_lo) + " to " + point_text(r.box_hi));
  row(os, "inf_f_hat", format_g6(r.inf_f_hat));
  std::string am = std::to_string(r.argmin_count);
  if (!r.argmin_points.empty()) {
    am += ", first " + point_text(r.argmin_points.front());
  }
  row(os, "argmin points", am);
  if (r.tau_sharp || r.tau_sound) {
    row(os, "tau", "sharp_inner " + opt_text(r.tau_sharp) + "  sound_outer " +
                       opt_text(r.tau_sound));
  }
  if (r.zeta_sharp || r.zeta_sound) {
    row(os, "zeta", "sharp_inner " + opt_text(r.zeta_sharp) + "  sound_outer " +
                        opt_text(r.zeta_sound));
  }
  if (r.sigma_checked) row(os, "sigma checked", opt_text(r.sigma_checked));
  if (r.sigma_hat) row(os, "sigma_hat", opt_text(r.sigma_hat));
  if (r.lipschitz) {
    row(os, "lipschitz", opt_text(r.lipschitz) + " (" + r.lipschitz_source + ")");
  }
  if (r.lambda) row(os, "lambda", opt_text(r.lambda));
  row(os, "backend", r.backend + (r.approx_geometry ? " (approx geometry)" : ""));
  row(os, "seed", std::to_string(r.seed));
  if (r.runtime_ms) row(os, "runtime ms", format_g6(*r.runtime_ms));
  if (!r.samples.empty()) {
    os << "  samples:\n";
    for (const auto& s : r.samples) {
      os << "    " << point_text(s.point) << "  " << format_g6(s.value) << '\n';
    }
  }
  if (!r.diagnostics.empty()) {
    os << "  diagnostics:\n";
    for (const auto& [k, v] : r.diagnostics) {
      os << "    " << k << " = " << format_g6(v) << '\n';
    }
  }
  if (r.violation_count > 0) {
    os << "  violations: " << r.violation_count << " (lhs > rhs)\n";
    for (std::size_t i = 0; i < r.violations.size() && i < 10; ++i) {
      const auto& v = r.violations[i];
      os << "    " << point_text(v.point) << "  lhs " << format_g6(v.lhs)
         << "  rhs " << format_g6(v.rhs) << '\n';
    }
  }
  if (!r.notes.empty()) {
    os << "  notes:\n";
    for (const auto& n : r.notes) os << "    - " << n << '\n';
  }
  os << r.disclaimer << '\n';
  return os.str();
}

}  // namespace wsharp
