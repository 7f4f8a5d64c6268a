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

// Certificate reports and their JSON / text renderings.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wsharp {

enum class Verdict { Certified, Refuted, Inconclusive };

// "certified-empirical", "refuted-on-grid", "inconclusive".
const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);
// 0, 2, 3.
int exit_code(Verdict v);

struct Violation {
  std::vector<double> point;
  double lhs = 0.0;
  double rhs = 0.0;
  bool operator==(const Violation&) const = default;
};

struct Sample {
  std::vector<double> point;
  double value = 0.0;
  bool operator==(const Sample&) const = default;
};

inline constexpr const char* kGridDisclaimer =
    "grid-empirical: infima over the box are replaced by infima over the "
    "sampled grid; this is not a proof";

struct CertificateReport {
  std::string kind;
  std::string condition;
  Verdict verdict = Verdict::Inconclusive;
  std::string mode = "unconstrained";

  double inf_f_hat = 0.0;
  std::size_t argmin_count = 0;
  std::vector<std::vector<double>> argmin_points;  // first kMaxListed

  // Inner (sharp) and outer (sound) variants of the nondegeneracy constant.
  std::optional<double> tau_sharp;
  std::optional<double> tau_sound;
  std::optional<double> zeta_sharp;
  std::optional<double> zeta_sound;
  std::optional<double> sigma_checked;
  std::optional<double> sigma_hat;
  std::optional<double> lipschitz;
  std::string lipschitz_source;
  std::optional<double> lambda;

  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxListed
  std::vector<Sample> samples;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;

  std::string backend;
  std::uint64_t seed = 0;
  int dim = 0;
  int resolution = 0;
  std::size_t grid_points = 0;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  bool approx_geometry = false;
  std::string disclaimer = kGridDisclaimer;
  std::optional<double> runtime_ms;

  bool operator==(const CertificateReport&) const = default;

  void diag(std::string name, double value) {
    diagnostics.emplace_back(std::move(name), value);
  }
  std::optional<double> diagnostic(const std::string& name) const;
};

inline constexpr std::size_t kMaxListed = 100;

// Stable field order, %.17g floats, infinities as "+inf" / "-inf".
std::string report_to_json(const CertificateReport& r, int indent = 2);
CertificateReport report_from_json(const std::string& text);

// Human-readable table with 6 significant digits.
std::string report_to_text(const CertificateReport& r);

// Shared float formatting.
std::string format_g17(double x);
std::string format_g6(double x);

}  // namespace wsharp
