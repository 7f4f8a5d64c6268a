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

// Demyanov difference of polytopes: the Clarke subdifferential at the origin
// of s(.|A) - s(.|B), realized as the hull of differences of points of A and
// B exposed by a common direction.

#include <cstdint>

#include "wsharp/geometry.hpp"
#include "wsharp/qdcalc.hpp"

namespace wsharp {

enum class DemyanovBackend { Exact1d, Exact2d, Sampled };

const char* to_string(DemyanovBackend b);

struct DemyanovOptions {
  // Use the sampled backend even in dims 1-2.
  bool force_sampled = false;
  int sample_count = 10000;
  std::uint64_t seed = kDirectionSeed;
  // Relative tie tolerance for the singleton max-face test.
  double tie_rel = 1e-9;
  // Arcs of the 2D normal-fan refinement shorter than this are merged.
  double arc_merge = 1e-12;
  // Sampled backend in the plane: bisect between angle-adjacent samples
  // whose exposed vertex pairs differ. Every recorded pair is still realized by an
  // actual direction, so the result stays an inner approximation.
  bool refine = true;
};

struct DemyanovResult {
  Polytope set;
  DemyanovBackend backend = DemyanovBackend::Exact1d;
  int sample_count = 0;  // 0 for exact backends
  int tie_skipped = 0;
};

DemyanovResult demyanov_diff(const Polytope& a, const Polytope& b,
                             const DemyanovOptions& opt = {});

// Demcoqd: sub (-) (-sup) for the textbook quasidifferential of e at x.
DemyanovResult demcoqd(const QuasiDiff& q, const DemyanovOptions& opt = {});
DemyanovResult demcoqd(const Expr& e, const Vector& x,
                       const DemyanovOptions& opt = {},
                       const QdOptions& qopt = {});

}  // namespace wsharp
