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

#include "wsharp/nnls.hpp"

#include <string>
#include <vector>

#include "wsharp/error.hpp"

namespace wsharp {
namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b,
                              const std::vector<char>& passive) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) idx.push_back(j);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  if (idx.empty()) return z;
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
  const Eigen::VectorXd zs = sub.completeOrthogonalDecomposition().solve(b);
  for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zs[k];
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                double tol) {
  check_same_dim("nnls", a.rows(), b.size());
  const Eigen::Index n = a.cols();
  NnlsResult r;
  r.x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  const double scale = 1.0 + a.cwiseAbs().maxCoeff() * (1.0 + b.norm());
  const int cap = 3 * static_cast<int>(n) + 3;

  for (;;) {
    const Eigen::VectorXd w = a.transpose() * (b - a * r.x);
    Eigen::Index t = -1;
    double best = tol * scale;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    if (++r.iterations > cap) {
      throw Error(ErrorCode::Convergence,
                  "nnls: iteration count exceeded (" + std::to_string(cap) +
                      ")");
    }
    passive[t] = 1;

    for (int inner = 0;; ++inner) {
      const Eigen::VectorXd z = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) feasible = false;
      }
      if (feasible) {
        r.x = z;
        break;
      }
      if (inner > 3 * n + 3) {
        throw Error(ErrorCode::Convergence, "nnls: inner loop stalled");
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) {
          const double denom = r.x[j] - z[j];
          if (denom > 0.0) alpha = std::min(alpha, r.x[j] / denom);
        }
      }
      r.x += alpha * (z - r.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && r.x[j] <= tol) {
          passive[j] = 0;
          r.x[j] = 0.0;
        }
      }
    }
  }
  r.residual_norm = (a * r.x - b).norm();
  return r;
}

Eigen::VectorXd project_onto_cone(const Eigen::MatrixXd& generators,
                                  const Eigen::VectorXd& u) {
  if (generators.cols() == 0) return Eigen::VectorXd::Zero(u.size());
  const NnlsResult r = nnls(generators, u);
  return generators * r.x;
}

}  // namespace wsharp
