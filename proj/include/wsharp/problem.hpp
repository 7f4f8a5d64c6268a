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

#pragma once

// Problem files and command dispatch.

#include <cstdint>
#include <optional>
#include <string>

#include "wsharp/certify.hpp"
#include "wsharp/json_io.hpp"

namespace wsharp {

inline constexpr int kProblemFormatVersion = 1;

ProblemInstance parse_problem(const std::string& path);
ProblemInstance parse_problem_text(const std::string& text);
ProblemInstance parse_problem_json(const json& j);

// Normalized problem with every default filled in.
json problem_to_json(const ProblemInstance& p);

// Global exhauster list or per-point entries {"at": x, "exhauster": [...]}.
std::vector<ExhausterOverride> exhauster_overrides_from_json(
    const json& j, int dim, const std::string& pointer);

struct RunOptions {
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> exhauster_path;
  bool timing = false;
};

bool is_known_command(const std::string& command);

// Runs one certify command. Throws Precondition on shape mismatch.
CertificateReport execute(const std::string& command, ProblemInstance p,
                          const RunOptions& opt, GridTrace* trace = nullptr);

// `demyanov A.json B.json`: result polytope plus backend metadata.
std::string demyanov_files(const std::string& a_path, const std::string& b_path,
                           const DemyanovOptions& opt = {});

std::string trace_to_csv(const GridTrace& trace, int dim);

json read_json_file(const std::string& path);

}  // namespace wsharp
