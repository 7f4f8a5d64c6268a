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

#include <Eigen/Dense>

namespace wsharp {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Lawson-Hanson active set solver for min |A x - b| subject to x >= 0.
// Throws Convergence after 3 * cols outer iterations.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                double tol = 1e-12);

// Euclidean projection of `u` onto the cone generated by the columns of
// `generators`. An empty generator matrix yields the zero vector.
Eigen::VectorXd project_onto_cone(const Eigen::MatrixXd& generators,
                                  const Eigen::VectorXd& u);

}  // namespace wsharp
