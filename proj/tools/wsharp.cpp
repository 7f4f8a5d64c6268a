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

// Command-line front end. Talks to the library only through wsharp.h.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "wsharp/wsharp.h"

namespace {

constexpr int kExitError = 1;

int fail(wsharp_status s) {
  std::fprintf(stderr, "wsharp: %s: %s\n", wsharp_status_name(s),
               wsharp_last_error());
  return kExitError;
}

// Owns a C string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { wsharp_string_free(p); }
};

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

int run_demyanov(const std::string& a, const std::string& b, bool sampled,
                 std::uint64_t seed) {
  CString out;
  const wsharp_status s =
      wsharp_demyanov_files(a.c_str(), b.c_str(), sampled ? 1 : 0, seed, &out.p);
  if (s != WSHARP_OK) return fail(s);
  std::fputs(out.p, stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-empirical certificates for global weak sharp minima"};
  app.set_version_flag("--version", wsharp_version());

  std::string problem_path;
  std::string command;
  std::string format = "text";
  std::string csv_path;
  std::string exhauster_path;
  std::vector<std::string> positional;
  double sigma = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool timing = false;
  bool sampled = false;
  bool echo = false;

  app.add_option("--problem", problem_path, "Problem JSON file");
  app.add_option("--command", command,
                 "certify-qd | certify-constrained | certify-exhauster | "
                 "certify-constrained-exhauster | slope | errorbound | "
                 "demyanov | wsharp-check");
  auto* sigma_opt = app.add_option("--sigma", sigma, "Modulus for wsharp-check");
  auto* lambda_opt = app.add_option("--lambda", lambda, "Penalty multiplier");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampled directions");
  app.add_option("--emit-csv", csv_path,
                 "Write x, f(x), dist to argmin and the condition value per grid point");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--exhauster", exhauster_path, "Exhauster JSON overriding the symbolic one");
  app.add_flag("--timing", timing, "Record runtime in the report");
  app.add_flag("--sampled", sampled, "demyanov: force the sampled backend");
  app.add_flag("--echo-problem", echo, "Print the normalized problem and exit");
  app.add_option("args", positional, "[command] [A.json B.json]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage errors share the generic error code.
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  if (command.empty() && !positional.empty() &&
      wsharp_command_known(positional.front().c_str())) {
    command = positional.front();
    positional.erase(positional.begin());
  }

  if (command == "demyanov") {
    if (positional.size() != 2) {
      std::fprintf(stderr, "wsharp: demyanov takes two polytope files\n");
      return kExitError;
    }
    return run_demyanov(positional[0], positional[1], sampled, seed);
  }
  if (!positional.empty()) {
    std::fprintf(stderr, "wsharp: unexpected argument '%s'\n",
                 positional.front().c_str());
    return kExitError;
  }
  if (problem_path.empty()) {
    std::fprintf(stderr, "wsharp: --problem is required\n");
    return kExitError;
  }

  wsharp_problem* problem = nullptr;
  wsharp_status s = wsharp_problem_load(problem_path.c_str(), &problem);
  if (s != WSHARP_OK) return fail(s);

  if (echo) {
    CString text;
    s = wsharp_problem_to_json(problem, &text.p);
    wsharp_problem_free(problem);
    if (s != WSHARP_OK) return fail(s);
    std::fputs(text.p, stdout);
    return 0;
  }
  if (command.empty()) {
    wsharp_problem_free(problem);
    std::fprintf(stderr, "wsharp: --command is required\n");
    return kExitError;
  }

  wsharp_run_options opt;
  wsharp_run_options_init(&opt);
  if (*sigma_opt) {
    opt.has_sigma = 1;
    opt.sigma = sigma;
  }
  if (*lambda_opt) {
    opt.has_lambda = 1;
    opt.lambda = lambda;
  }
  if (*seed_opt) {
    opt.has_seed = 1;
    opt.seed = seed;
  }
  opt.timing = timing ? 1 : 0;
  opt.collect_trace = csv_path.empty() ? 0 : 1;
  opt.exhauster_path = exhauster_path.empty() ? nullptr : exhauster_path.c_str();

  wsharp_report* report = nullptr;
  s = wsharp_run(problem, command.c_str(), &opt, &report);
  wsharp_problem_free(problem);
  if (s != WSHARP_OK) return fail(s);

  int code = kExitError;
  {
    CString text;
    s = wsharp_report_render(report, format.c_str(), &text.p);
    if (s == WSHARP_OK) {
      std::fputs(text.p, stdout);
      code = static_cast<int>(wsharp_report_verdict(report));
    }
  }
  if (s == WSHARP_OK && !csv_path.empty()) {
    CString csv;
    s = wsharp_report_csv(report, &csv.p);
    if (s == WSHARP_OK && !write_file(csv_path, csv.p)) {
      std::fprintf(stderr, "wsharp: cannot write %s\n", csv_path.c_str());
      code = kExitError;
    }
  }
  wsharp_report_free(report);
  if (s != WSHARP_OK) return fail(s);
  return code;
}
