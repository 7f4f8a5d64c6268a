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

#include "wsharp/problem.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wsharp {
namespace {

// Optional fields may be absent or null; the normalized echo writes null.
bool set(const json& j, const char* key) {
  return j.contains(key) && !j[key].is_null();
}


using ojson = nlohmann::ordered_json;

void only_keys(const json& j, const std::string& ptr,
               std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) schema_error(ptr + "/" + it.key(), "unknown field");
  }
}

const json& need(const json& j, const char* key, const std::string& ptr) {
  if (!j.contains(key)) schema_error(ptr + "/" + key, "missing required field");
  return j.at(key);
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) schema_error(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(ptr, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& ptr) {
  const double v = number(j, ptr);
  if (!(v > 0.0)) schema_error(ptr, "expected a positive number");
  return v;
}

double nonnegative(const json& j, const std::string& ptr) {
  const double v = number(j, ptr);
  if (!(v >= 0.0)) schema_error(ptr, "expected a nonnegative number");
  return v;
}

const json& object_at(const json& j, const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expected an object");
  return j;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

std::vector<ExhausterOverride> exhauster_overrides_from_json(
    const json& j, int dim, const std::string& ptr) {
  if (!j.is_array() || j.empty()) {
    schema_error(ptr, "expected a nonempty array");
  }
  std::vector<ExhausterOverride> out;
  if (j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = ptr + "/" + std::to_string(i);
      object_at(j[i], p);
      only_keys(j[i], p, {"at", "exhauster"});
      ExhausterOverride o;
      if (j[i].contains("at")) o.at = vector_from_json(j[i]["at"], p + "/at", dim);
      o.members = polytope_list_from_json(need(j[i], "exhauster", p), p + "/exhauster");
      out.push_back(std::move(o));
    }
  } else {
    out.push_back({std::nullopt, polytope_list_from_json(j, ptr)});
  }
  for (const auto& o : out) {
    for (const auto& m : o.members) check_same_dim("exhauster", dim, m.dim());
  }
  return out;
}

ProblemInstance parse_problem_json(const json& j) {
  object_at(j, "");
  only_keys(j, "", {"version", "space_dim", "objective", "constraints", "box",
                    "resolution", "tolerances", "lipschitz", "lambda", "seed",
                    "options"});
  const json& ver = need(j, "version", "");
  if (!ver.is_number_integer() || ver.get<int>() != kProblemFormatVersion) {
    schema_error("/version", "unsupported format version");
  }
  const json& dj = need(j, "space_dim", "");
  if (!dj.is_number_integer() || dj.get<int>() < 1) {
    schema_error("/space_dim", "expected an integer >= 1");
  }
  const int dim = dj.get<int>();

  const Expr objective = expr_from_json(need(j, "objective", ""), dim, "/objective");
  if (objective.dim() != dim) {
    schema_error("/objective", "dimension differs from space_dim");
  }

  const json& box = object_at(need(j, "box", ""), "/box");
  only_keys(box, "/box", {"lo", "hi"});
  const Vector lo = vector_from_json(need(box, "lo", "/box"), "/box/lo", dim);
  const Vector hi = vector_from_json(need(box, "hi", "/box"), "/box/hi", dim);
  if (lo.size() != dim) schema_error("/box/lo", "length differs from space_dim");
  if (hi.size() != dim) schema_error("/box/hi", "length differs from space_dim");
  for (int i = 0; i < dim; ++i) {
    if (lo[i] > hi[i]) {
      schema_error("/box", "low > high at coordinate " + std::to_string(i));
    }
  }

  const json& res = need(j, "resolution", "");
  if (!res.is_number_integer() || res.get<long long>() < 2) {
    schema_error("/resolution", "expected an integer >= 2");
  }

  ProblemInstance p(objective, lo, hi, res.get<int>());

  if (j.contains("constraints")) {
    const json& c = object_at(j["constraints"], "/constraints");
    only_keys(c, "/constraints", {"g", "h", "polyhedron"});
    if (c.contains("g")) p.g = expr_from_json(c["g"], dim, "/constraints/g");
    if (c.contains("h")) p.h = expr_from_json(c["h"], dim, "/constraints/h");
    if (c.contains("polyhedron")) {
      const json& rows = c["polyhedron"];
      if (!rows.is_array() || rows.empty()) {
        schema_error("/constraints/polyhedron", "expected a nonempty array of rows");
      }
      Polyhedron poly;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string ptr = "/constraints/polyhedron/" + std::to_string(i);
        object_at(rows[i], ptr);
        only_keys(rows[i], ptr, {"c", "d"});
        poly.normals.push_back(vector_from_json(need(rows[i], "c", ptr), ptr + "/c", dim));
        poly.offsets.push_back(number(need(rows[i], "d", ptr), ptr + "/d"));
      }
      p.polyhedron = std::move(poly);
    }
  }

  if (j.contains("tolerances")) {
    const json& t = object_at(j["tolerances"], "/tolerances");
    only_keys(t, "/tolerances", {"argmin", "tie", "feasibility", "estimate_lipschitz"});
    if (t.contains("argmin") && t["argmin"] != "auto") {
      p.tol.argmin = positive(t["argmin"], "/tolerances/argmin");
    }
    if (t.contains("tie")) p.tol.tie = nonnegative(t["tie"], "/tolerances/tie");
    if (t.contains("feasibility")) {
      p.tol.feasibility = nonnegative(t["feasibility"], "/tolerances/feasibility");
    }
    if (t.contains("estimate_lipschitz")) {
      if (!t["estimate_lipschitz"].is_boolean()) {
        schema_error("/tolerances/estimate_lipschitz", "expected a boolean");
      }
      p.tol.estimate_lipschitz = t["estimate_lipschitz"].get<bool>();
    }
  }
  if (set(j, "lipschitz")) p.lipschitz = nonnegative(j["lipschitz"], "/lipschitz");
  if (set(j, "lambda")) p.lambda = positive(j["lambda"], "/lambda");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() &&
                                              j["seed"].get<long long>() >= 0)) {
      schema_error("/seed", "expected a nonnegative integer");
    }
    p.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("options")) {
    const json& o = object_at(j["options"], "/options");
    only_keys(o, "/options", {"sigma", "errorbound", "slope", "exhauster"});
    if (set(o, "sigma")) p.sigma = nonnegative(o["sigma"], "/options/sigma");
    if (o.contains("errorbound")) {
      const json& e = object_at(o["errorbound"], "/options/errorbound");
      only_keys(e, "/options/errorbound", {"alpha", "beta", "tau"});
      if (e.contains("alpha")) p.errorbound.alpha = number(e["alpha"], "/options/errorbound/alpha");
      if (e.contains("beta")) p.errorbound.beta = number(e["beta"], "/options/errorbound/beta");
      if (set(e, "tau")) p.errorbound.tau = positive(e["tau"], "/options/errorbound/tau");
    }
    if (o.contains("slope")) {
      const json& s = object_at(o["slope"], "/options/slope");
      only_keys(s, "/options/slope", {"at"});
      if (s.contains("at")) {
        if (!s["at"].is_array()) schema_error("/options/slope/at", "expected an array");
        for (std::size_t i = 0; i < s["at"].size(); ++i) {
          p.slope_at.push_back(vector_from_json(
              s["at"][i], "/options/slope/at/" + std::to_string(i), dim));
        }
      }
    }
    if (set(o, "exhauster") && !(o["exhauster"].is_array() && o["exhauster"].empty())) {
      p.exhauster = exhauster_overrides_from_json(o["exhauster"], dim, "/options/exhauster");
    }
  }
  p.validate();
  return p;
}

ProblemInstance parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return parse_problem_json(j);
}

ProblemInstance parse_problem(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return parse_problem_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

json problem_to_json(const ProblemInstance& p) {
  json j;
  j["version"] = kProblemFormatVersion;
  j["space_dim"] = p.dim();
  j["objective"] = expr_to_json(p.objective);
  if (p.constrained()) {
    json c = json::object();
    if (p.g) c["g"] = expr_to_json(*p.g);
    if (p.h) c["h"] = expr_to_json(*p.h);
    if (p.polyhedron) {
      json rows = json::array();
      for (std::size_t i = 0; i < p.polyhedron->normals.size(); ++i) {
        rows.push_back({{"c", vector_to_json(p.polyhedron->normals[i])},
                        {"d", p.polyhedron->offsets[i]}});
      }
      c["polyhedron"] = rows;
    }
    j["constraints"] = c;
  }
  j["box"] = {{"lo", vector_to_json(p.lo)}, {"hi", vector_to_json(p.hi)}};
  j["resolution"] = p.resolution;
  json t;
  t["argmin"] = p.tol.argmin ? json(*p.tol.argmin) : json("auto");
  t["tie"] = p.tol.tie;
  t["feasibility"] = p.tol.feasibility;
  t["estimate_lipschitz"] = p.tol.estimate_lipschitz;
  j["tolerances"] = t;
  j["lipschitz"] = p.lipschitz ? json(*p.lipschitz) : json(nullptr);
  j["lambda"] = p.lambda ? json(*p.lambda) : json(nullptr);
  j["seed"] = p.seed;
  json o;
  o["sigma"] = p.sigma ? json(*p.sigma) : json(nullptr);
  o["errorbound"] = {{"alpha", p.errorbound.alpha},
                     {"beta", p.errorbound.beta},
                     {"tau", p.errorbound.tau ? json(*p.errorbound.tau) : json(nullptr)}};
  json at = json::array();
  for (const auto& x : p.slope_at) at.push_back(vector_to_json(x));
  o["slope"] = {{"at", at}};
  json ex = json::array();
  for (const auto& e : p.exhauster) {
    json members = json::array();
    for (const auto& m : e.members) members.push_back(polytope_to_json(m));
    json entry = {{"exhauster", members}};
    if (e.at) entry["at"] = vector_to_json(*e.at);
    ex.push_back(entry);
  }
  o["exhauster"] = ex;
  j["options"] = o;
  return j;
}

bool is_known_command(const std::string& c) {
  static const std::set<std::string> known = {
      "certify-qd", "certify-constrained", "certify-exhauster",
      "certify-constrained-exhauster", "slope", "errorbound", "demyanov",
      "wsharp-check"};
  return known.count(c) > 0;
}

CertificateReport execute(const std::string& command, ProblemInstance p,
                          const RunOptions& opt, GridTrace* trace) {
  if (!is_known_command(command)) {
    throw Error(ErrorCode::InvalidArgument, "unknown command \"" + command + "\"");
  }
  if (command == "demyanov") {
    throw Error(ErrorCode::Precondition,
                "demyanov takes two polytope files, not a problem");
  }
  if (opt.sigma) p.sigma = *opt.sigma;
  if (opt.lambda) p.lambda = *opt.lambda;
  if (opt.seed) p.seed = *opt.seed;
  if (opt.exhauster_path) {
    p.exhauster = exhauster_overrides_from_json(read_json_file(*opt.exhauster_path),
                                                p.dim(), "");
  }

  const auto start = std::chrono::steady_clock::now();
  CertificateReport r;
  if (command == "certify-qd") {
    r = certify_qd(p, trace);
  } else if (command == "certify-constrained") {
    r = certify_constrained(p, trace);
  } else if (command == "certify-exhauster") {
    r = certify_exhauster(p, trace);
  } else if (command == "certify-constrained-exhauster") {
    r = certify_constrained_exhauster(p, trace);
  } else if (command == "slope") {
    r = certify_slope(p, trace);
  } else if (command == "errorbound") {
    r = check_error_bound(p, trace);
  } else {
    if (!p.sigma) {
      throw Error(ErrorCode::Precondition,
                  "wsharp-check needs sigma (--sigma or options.sigma)");
    }
    r = wsharp_check(p, *p.sigma, trace);
  }
  if (opt.timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  }
  return r;
}

std::string demyanov_files(const std::string& a_path, const std::string& b_path,
                           const DemyanovOptions& opt) {
  const Polytope a = polytope_from_json(read_json_file(a_path), "");
  const Polytope b = polytope_from_json(read_json_file(b_path), "");
  const DemyanovResult d = demyanov_diff(a, b, opt);
  ojson out;
  out["backend"] = to_string(d.backend);
  out["sample_count"] = d.sample_count;
  out["tie_skipped"] = d.tie_skipped;
  out["approx"] = d.set.approx();
  ojson verts = ojson::array();
  for (const auto& v : d.set.vertices()) {
    ojson row = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v[i]);
    verts.push_back(row);
  }
  out["polytope"] = verts;
  return dump_g17(out, 2) + "\n";
}

std::string trace_to_csv(const GridTrace& trace, int dim) {
  std::string out;
  for (int i = 0; i < dim; ++i) out += "x" + std::to_string(i + 1) + ",";
  out += "f,dist_to_argmin," +
         (trace.condition_name.empty() ? std::string("condition")
                                        : trace.condition_name) +
         "\n";
  for (const auto& row : trace.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      if (!std::isnan(row[k])) out += format_g17(row[k]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace wsharp
