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

// Lower exhausters h(v) = min_E s(v | E) of positively homogeneous functions,
// their norm, and numerical Hadamard directional derivatives.

#include <functional>
#include <optional>
#include <vector>

#include "wsharp/geometry.hpp"
#include "wsharp/qdcalc.hpp"

namespace wsharp {

class LowerExhauster {
 public:
  explicit LowerExhauster(std::vector<Polytope> members);

  int dim() const { return members_.front().dim(); }
  const std::vector<Polytope>& members() const { return members_; }
  bool approx() const;

 private:
  std::vector<Polytope> members_;
};

double exhauster_eval(const LowerExhauster& e, const Vector& v);

// sup over members of the distance from the origin.
double exhauster_norm(const LowerExhauster& e, double tol = kMinNormTol);

// Member i is conv(rows[i]); represents v -> min_i max_j <rows[i][j], v>.
LowerExhauster exhauster_from_minmax(
    const std::vector<std::vector<Vector>>& rows);

// Exhauster of the directional derivative of `e` at `x`. A Min node yields
// the union of its active children's families and a Sum the pairwise sums;
// any other node goes through its quasidifferential as {sub + w : w a
// vertex of sup}.
LowerExhauster symbolic_exhauster(const Expr& e, const Vector& x,
                                  const QdOptions& opt = {});

using ScalarFn = std::function<double(const Vector&)>;

// Fixed estimator schedule: scales t_k = 2^-k for k = 6..18, five step
// samples in [t_k, 2 t_k], direction perturbations v + t_k^2 u over an
// eight-direction stencil.
struct HadamardSchedule {
  int k_first = 6;
  int k_last = 18;
  int steps_per_scale = 5;
};

// Numerical liminf of (f(x + t v') - f(x)) / t as t -> 0+, v' -> v. The
// per-scale minima are folded into tail minima, which are nondecreasing in
// k, and the largest is returned. Returns -inf/+inf on overflow.
double hadamard_lower_estimate(const ScalarFn& f, const Vector& x,
                               const Vector& v,
                               const HadamardSchedule& s = {});
double hadamard_upper_estimate(const ScalarFn& f, const Vector& x,
                               const Vector& v,
                               const HadamardSchedule& s = {});

// Perturbation stencil used by the estimators.
std::vector<Vector> hadamard_stencil(int dim);

}  // namespace wsharp
