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

// Convex polytopes in V-representation: support functions, exposed faces,
// Minkowski arithmetic, hulls, set comparison and the min-norm point.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wsharp/error.hpp"

namespace wsharp {

using Vector = Eigen::VectorXd;

// Throws InvalidArgument when any entry is NaN or infinite.
void require_finite(const Vector& v, const char* where);

// Nonempty finite vertex list. `canonical` means the list holds exactly the
// extreme points; `approx` marks polytopes standing in for a curved body.
class Polytope {
 public:
  explicit Polytope(std::vector<Vector> vertices, bool canonical = false,
                    bool approx = false);

  static Polytope point(const Vector& p);
  static Polytope origin(int dim);
  // Closed interval [lo, hi] in R^1.
  static Polytope interval(double lo, double hi);

  int dim() const { return static_cast<int>(vertices_.front().size()); }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const Vector& vertex(std::size_t i) const { return vertices_[i]; }
  bool canonical() const { return canonical_; }
  bool approx() const { return approx_; }

  Polytope with_approx(bool approx) const;

 private:
  std::vector<Vector> vertices_;
  bool canonical_ = false;
  bool approx_ = false;
};

double support_value(const Polytope& p, const Vector& v);

struct ExposedFace {
  std::vector<Vector> vertices;
  // True iff more than one extreme point attains the support value.
  bool tie = false;
};

// Vertices within `tie_tol` of the support value in direction `v`.
ExposedFace exposed_vertices(const Polytope& p, const Vector& v,
                             double tie_tol);

// Index of the maximizing vertex and whether it is unique up to `tie_tol`.
struct Maximizer {
  std::size_t index = 0;
  double value = 0.0;
  bool unique = true;
};
Maximizer argmax_vertex(const Polytope& p, const Vector& v, double tie_tol);

// Reduce to extreme points. Exact hull in dims 1-2; per-vertex redundancy
// test through min_norm_point in higher dims.
Polytope canonicalize(const Polytope& p);

Polytope minkowski_sum(const Polytope& p, const Polytope& q);
Polytope minkowski_sum(std::span<const Polytope> ps);
Polytope scale(double alpha, const Polytope& p);
Polytope reflect(const Polytope& p);
Polytope translate(const Polytope& p, const Vector& shift);
Polytope conv_union(std::span<const Polytope> ps);
Polytope conv_union(const Polytope& p, const Polytope& q);

inline constexpr double kMinNormTol = 1e-10;

struct MinNormPoint {
  Vector point;
  // Snapped to exactly 0 when the origin lies in the polytope within tol.
  double distance = 0.0;
  int iterations = 0;
};

// Wolfe's projection of the origin onto conv(vertices). Throws Convergence
// when the major-iteration cap 10 * size * dim is exhausted.
MinNormPoint min_norm_point(const Polytope& p, double tol = kMinNormTol);

// Euclidean distance from `x` to the polytope.
double distance_to(const Polytope& p, const Vector& x,
                   double tol = kMinNormTol);

enum class SetRelation { Equal, Subset, Superset, Incomparable };

const char* to_string(SetRelation r);

struct SetComparison {
  SetRelation relation = SetRelation::Incomparable;
  double hausdorff = 0.0;
};

inline constexpr std::uint64_t kDirectionSeed = 0x5EED;
inline constexpr int kCompareDirections = 4096;

// Subset means p is contained in q. Exact vertex-distance test in dims 1-2,
// support comparison over the fixed direction set above that.
SetComparison set_compare(const Polytope& p, const Polytope& q, double tol);

// Deterministic low-discrepancy unit vectors. Dim 1 yields {+1, -1}; dim 2
// evenly spaced angles rotated by a seed-derived offset; higher dims a
// Kronecker sequence pushed through Box-Muller and normalized.
std::vector<Vector> direction_set(int dim, int count, std::uint64_t seed);

}  // namespace wsharp
