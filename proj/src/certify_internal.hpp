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

#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "wsharp/certify.hpp"

namespace wsharp::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Off-grid probe points count as minimizers only up to roundoff; the
// argmin tolerance would swallow the segments the probes are meant to see.
inline constexpr double kProbeTol = 1e-14;

std::vector<double> to_std(const Vector& v);

CertificateReport make_report(const ProblemInstance& p, const Grid& grid,
                              std::string kind, std::string condition);

void record_argmin(CertificateReport& r, const Grid& grid,
                   const ArgminResult& a);

void record_violations(CertificateReport& r, const WsharpCheck& wc);

// Collects backend labels in first-seen order and joins them with '+'.
struct BackendSet {
  std::vector<std::string> labels;
  void add(const std::string& s);
  std::string joined() const;
};

// Detects conditions that shrink to zero along segments from the boundary
// of an excluded set into its complement, which a fixed grid cannot see.
struct VanishingProbe {
  bool vanishing = false;
  std::size_t segments = 0;
  double smallest = kInf;
};

VanishingProbe probe_vanishing(
    const Grid& grid, const std::vector<char>& excluded,
    const std::function<bool(const Vector&)>& inside,
    const std::function<double(const Vector&)>& condition,
    std::size_t max_segments = 64);

// Shared verdict logic. `tau` is the sound constant of the sufficient
// condition; `missing` lists points where it could not be evaluated.
void conclude(CertificateReport& r, const ProblemInstance& p,
              const Grid& grid, const ArgminResult& a, double tau,
              bool vanishing, const std::vector<Vector>& missing,
              bool constrained, WsharpCheck* out = nullptr);

std::string format_point(const Vector& x);

// Resolves lambda against the Lipschitz rank; throws Precondition when
// lambda <= l_f.
struct PenaltyWeights {
  double lipschitz = 0.0;
  std::string source;
  double lambda = 0.0;
};
PenaltyWeights resolve_penalty(const ProblemInstance& p, const Grid& grid,
                               const std::vector<double>& values);

// Exhauster at x: the user entry when one applies, symbolic otherwise.
LowerExhauster exhauster_at(const ProblemInstance& p, const Vector& x,
                            bool& user);

void append_trace(GridTrace* trace, const Grid& grid,
                  const ArgminResult& a, const std::vector<double>& dist,
                  const std::vector<double>& condition);

}  // namespace wsharp::detail
