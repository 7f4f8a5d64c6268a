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

// Quasidifferential calculus over a small expression language.
//
// A quasidifferential is stored as the pair (sub, sup) of a subdifferential
// and a superdifferential, so that
//
//   f'(x; v) = s(v | sub) - s(v | -sup) = max_{a in sub} <a,v> + min_{b in sup} <b,v>.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wsharp/geometry.hpp"

namespace wsharp {

struct QuasiDiff {
  Polytope sub;
  Polytope sup;

  int dim() const { return sub.dim(); }
  // True when a curved set (the Euclidean ball) was replaced by a polytope.
  bool approx() const { return sub.approx() || sup.approx(); }
};

QuasiDiff make_quasidiff(Polytope sub, Polytope sup);

double dir_derivative(const QuasiDiff& q, const Vector& v);

// Class equality on the fixed direction set: the two pairs induce the same
// directional derivative within `tol`.
bool qd_equiv(const QuasiDiff& a, const QuasiDiff& b, double tol);

QuasiDiff qd_sum(const QuasiDiff& a, const QuasiDiff& b);
// Nonnegative factors scale both parts; negative factors go through qd_neg.
QuasiDiff qd_scale(double alpha, const QuasiDiff& q);
// D(-f) = [-sup, -sub].
QuasiDiff qd_neg(const QuasiDiff& q);

struct ActiveBranch {
  double value;
  QuasiDiff qd;
};

// Pointwise max over branches already filtered to the active set:
//   sub = conv U_i (sub_i - sum_{j != i} sup_j),  sup = sum_i sup_i.
QuasiDiff qd_max_active(const std::vector<QuasiDiff>& active);

// [g]_+ at a point where g has value `g_at_x`; zero band |g| <= tol.
QuasiDiff qd_pospart(const QuasiDiff& qg, double g_at_x, double tol);
// |h| at a point where h has value `h_at_x`; zero band |h| <= tol.
QuasiDiff qd_abs(const QuasiDiff& qh, double h_at_x, double tol);

// Representative-dependent outer bound sub + sup of the Demyanov construction.
Polytope qd_outer_bound(const QuasiDiff& q);

// Polytope stand-in for the closed Euclidean unit ball: exact in dim 1,
// a regular 32-gon in dim 2, conv{+-e_i, (+-1,...,+-1)/sqrt(n)} above.
// Marked approx for dim >= 2.
Polytope unit_ball_standin(int dim);

struct Monomial {
  double coef = 0.0;
  std::vector<int> exponents;
};

class Expr;
struct ExprNode;

enum class ExprKind {
  Affine,
  Norm2,
  Poly,
  Rational,
  Sum,
  Scale,
  Neg,
  Max,
  Min,
  PosPart,
  Abs,
  Piecewise,
};

const char* to_string(ExprKind k);

// Immutable expression tree; copies share structure.
class Expr {
 public:
  static Expr affine(Vector a, double b);
  static Expr constant(int dim, double c);
  static Expr coordinate(int dim, int i);
  // |x - center|; center defaults to the origin.
  static Expr norm2(int dim, std::optional<Vector> center = std::nullopt);
  static Expr poly(int dim, std::vector<Monomial> terms);
  // Quotient of two polynomials; the denominator must not vanish where the
  // expression is evaluated.
  static Expr rational(int dim, std::vector<Monomial> num,
                       std::vector<Monomial> den);
  static Expr sum(std::vector<Expr> args);
  static Expr scale(double alpha, Expr arg);
  static Expr neg(Expr arg);
  static Expr max(std::vector<Expr> args);
  static Expr min(std::vector<Expr> args);
  static Expr pospart(Expr arg);
  static Expr abs(Expr arg);
  // Piece k applies where breaks[k-1] < x[coord] <= breaks[k].
  static Expr piecewise(int coord, std::vector<double> breaks,
                        std::vector<Expr> pieces);

  int dim() const;
  ExprKind kind() const;
  const ExprNode& node() const { return *node_; }

  double evaluate(const Vector& x) const;
  double operator()(const Vector& x) const { return evaluate(x); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind;
  int dim = 0;
  Vector a;                      // Affine slope, Norm2 center
  double b = 0.0;                // Affine offset, Scale factor
  std::vector<Monomial> num;     // Poly terms, Rational numerator
  std::vector<Monomial> den;     // Rational denominator
  std::vector<Expr> args;        // children
  int coord = 0;                 // Piecewise coordinate
  std::vector<double> breaks;    // Piecewise breakpoints
};

inline double evaluate(const Expr& e, const Vector& x) {
  return e.evaluate(x);
}

inline constexpr double kActivityTol = 1e-9;

struct QdOptions {
  // Branch i of a max/min is active iff value_i >= max - tol (1 + |max|);
  // the same band decides the sign at pospart/abs nodes.
  double activity_tol = kActivityTol;
};

// Textbook quasidifferential of `e` at `x`. Throws NotQuasidifferentiable
// at piecewise breakpoints.
QuasiDiff quasidiff(const Expr& e, const Vector& x, const QdOptions& opt = {});

// Gradient of a polynomial given by its terms.
Vector poly_gradient(const std::vector<Monomial>& terms, const Vector& x);
double poly_value(const std::vector<Monomial>& terms, const Vector& x);

}  // namespace wsharp
