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

#include "wsharp/qdcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wsharp {

QuasiDiff make_quasidiff(Polytope sub, Polytope sup) {
  check_same_dim("QuasiDiff", sub.dim(), sup.dim());
  return QuasiDiff{std::move(sub), std::move(sup)};
}

double dir_derivative(const QuasiDiff& q, const Vector& v) {
  check_same_dim("dir_derivative", q.dim(), v.size());
  return support_value(q.sub, v) + -support_value(q.sup, -v);
}

bool qd_equiv(const QuasiDiff& a, const QuasiDiff& b, double tol) {
  check_same_dim("qd_equiv", a.dim(), b.dim());
  for (const auto& d :
       direction_set(a.dim(), kCompareDirections, kDirectionSeed)) {
    if (std::abs(dir_derivative(a, d) - dir_derivative(b, d)) > tol) {
      return false;
    }
  }
  return true;
}

QuasiDiff qd_sum(const QuasiDiff& a, const QuasiDiff& b) {
  check_same_dim("qd_sum", a.dim(), b.dim());
  return {minkowski_sum(a.sub, b.sub), minkowski_sum(a.sup, b.sup)};
}

QuasiDiff qd_neg(const QuasiDiff& q) {
  return {reflect(q.sup), reflect(q.sub)};
}

QuasiDiff qd_scale(double alpha, const QuasiDiff& q) {
  if (alpha < 0.0) return qd_scale(-alpha, qd_neg(q));
  return {scale(alpha, q.sub), scale(alpha, q.sup)};
}

QuasiDiff qd_max_active(const std::vector<QuasiDiff>& active) {
  if (active.empty()) {
    throw Error(ErrorCode::InvalidArgument, "qd_max_active: no branches");
  }
  if (active.size() == 1) return active.front();
  std::vector<Polytope> reflected_sups;
  for (const auto& q : active) reflected_sups.push_back(reflect(q.sup));

  std::vector<Polytope> pieces;
  for (std::size_t i = 0; i < active.size(); ++i) {
    Polytope piece = active[i].sub;
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (j != i) piece = minkowski_sum(piece, reflected_sups[j]);
    }
    pieces.push_back(std::move(piece));
  }
  std::vector<Polytope> sups;
  for (const auto& q : active) sups.push_back(q.sup);
  return {conv_union(pieces), minkowski_sum(sups)};
}

QuasiDiff qd_pospart(const QuasiDiff& qg, double g_at_x, double tol) {
  if (g_at_x > tol) return qg;
  if (g_at_x < -tol) {
    return {Polytope::origin(qg.dim()), Polytope::origin(qg.dim())};
  }
  return {conv_union(qg.sub, reflect(qg.sup)), qg.sup};
}

QuasiDiff qd_abs(const QuasiDiff& qh, double h_at_x, double tol) {
  if (h_at_x > tol) return qh;
  if (h_at_x < -tol) return qd_neg(qh);
  return {scale(2.0, conv_union(qh.sub, reflect(qh.sup))),
          minkowski_sum(qh.sup, reflect(qh.sub))};
}

Polytope qd_outer_bound(const QuasiDiff& q) {
  return minkowski_sum(q.sub, q.sup);
}

Polytope unit_ball_standin(int dim) {
  if (dim == 1) return Polytope::interval(-1.0, 1.0);
  std::vector<Vector> pts;
  if (dim == 2) {
    for (int k = 0; k < 32; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 32.0;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      pts.push_back(v);
    }
    return Polytope(std::move(pts), true, true);
  }
  for (int i = 0; i < dim; ++i) {
    pts.push_back(Vector::Unit(dim, i));
    pts.push_back(-Vector::Unit(dim, i));
  }
  const double c = 1.0 / std::sqrt(static_cast<double>(dim));
  for (long mask = 0; mask < (1L << dim); ++mask) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? c : -c;
    pts.push_back(v);
  }
  return Polytope(std::move(pts), true, true);
}

// --- polynomials -----------------------------------------------------------

double poly_value(const std::vector<Monomial>& terms, const Vector& x) {
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.coef;
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      if (t.exponents[i] != 0) m *= std::pow(x[i], t.exponents[i]);
    }
    s += m;
  }
  return s;
}

Vector poly_gradient(const std::vector<Monomial>& terms, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  for (const auto& t : terms) {
    for (std::size_t k = 0; k < t.exponents.size(); ++k) {
      if (t.exponents[k] == 0) continue;
      double m = t.coef * t.exponents[k];
      for (std::size_t i = 0; i < t.exponents.size(); ++i) {
        const int e = i == k ? t.exponents[i] - 1 : t.exponents[i];
        if (e != 0) m *= std::pow(x[i], e);
      }
      g[k] += m;
    }
  }
  return g;
}

// --- expressions -----------------------------------------------------------

const char* to_string(ExprKind k) {
  switch (k) {
    case ExprKind::Affine: return "affine";
    case ExprKind::Norm2: return "norm2";
    case ExprKind::Poly: return "poly";
    case ExprKind::Rational: return "rational";
    case ExprKind::Sum: return "sum";
    case ExprKind::Scale: return "scale";
    case ExprKind::Neg: return "neg";
    case ExprKind::Max: return "max";
    case ExprKind::Min: return "min";
    case ExprKind::PosPart: return "pospart";
    case ExprKind::Abs: return "abs";
    case ExprKind::Piecewise: return "piecewise";
  }
  return "?";
}

namespace {

std::shared_ptr<ExprNode> make_node(ExprKind k, int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "Expr: dim must be >= 1");
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->dim = dim;
  return n;
}

int common_dim(const std::vector<Expr>& args, const char* where) {
  if (args.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(where) + ": needs at least one argument");
  }
  const int d = args.front().dim();
  for (const auto& a : args) check_same_dim(where, d, a.dim());
  return d;
}

void check_terms(const std::vector<Monomial>& terms, int dim) {
  for (const auto& t : terms) {
    check_same_dim("poly", dim, static_cast<long>(t.exponents.size()));
    if (!std::isfinite(t.coef)) {
      throw Error(ErrorCode::InvalidArgument, "poly: non-finite coefficient");
    }
    for (int e : t.exponents) {
      if (e < 0) {
        throw Error(ErrorCode::InvalidArgument, "poly: negative exponent");
      }
    }
  }
}

}  // namespace

Expr Expr::affine(Vector a, double b) {
  require_finite(a, "affine");
  if (!std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "affine: non-finite offset");
  }
  auto n = make_node(ExprKind::Affine, static_cast<int>(a.size()));
  n->a = std::move(a);
  n->b = b;
  return Expr(std::move(n));
}

Expr Expr::constant(int dim, double c) {
  return affine(Vector::Zero(dim), c);
}

Expr Expr::coordinate(int dim, int i) {
  return affine(Vector::Unit(dim, i), 0.0);
}

Expr Expr::norm2(int dim, std::optional<Vector> center) {
  auto n = make_node(ExprKind::Norm2, dim);
  n->a = center ? *center : Vector::Zero(dim);
  check_same_dim("norm2", dim, n->a.size());
  require_finite(n->a, "norm2");
  return Expr(std::move(n));
}

Expr Expr::poly(int dim, std::vector<Monomial> terms) {
  auto n = make_node(ExprKind::Poly, dim);
  check_terms(terms, dim);
  n->num = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::rational(int dim, std::vector<Monomial> num,
                    std::vector<Monomial> den) {
  auto n = make_node(ExprKind::Rational, dim);
  check_terms(num, dim);
  check_terms(den, dim);
  if (den.empty()) {
    throw Error(ErrorCode::InvalidArgument, "rational: empty denominator");
  }
  n->num = std::move(num);
  n->den = std::move(den);
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> args) {
  auto n = make_node(ExprKind::Sum, common_dim(args, "sum"));
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::scale(double alpha, Expr arg) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "scale: non-finite factor");
  }
  auto n = make_node(ExprKind::Scale, arg.dim());
  n->b = alpha;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::neg(Expr arg) {
  auto n = make_node(ExprKind::Neg, arg.dim());
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::max(std::vector<Expr> args) {
  auto n = make_node(ExprKind::Max, common_dim(args, "max"));
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::min(std::vector<Expr> args) {
  auto n = make_node(ExprKind::Min, common_dim(args, "min"));
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::pospart(Expr arg) {
  auto n = make_node(ExprKind::PosPart, arg.dim());
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::abs(Expr arg) {
  auto n = make_node(ExprKind::Abs, arg.dim());
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::piecewise(int coord, std::vector<double> breaks,
                     std::vector<Expr> pieces) {
  const int d = common_dim(pieces, "piecewise");
  if (coord < 0 || coord >= d) {
    throw Error(ErrorCode::InvalidArgument, "piecewise: coord out of range");
  }
  if (pieces.size() != breaks.size() + 1) {
    throw Error(ErrorCode::InvalidArgument,
                "piecewise: need exactly one more piece than breaks");
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!std::isfinite(breaks[i]) || (i > 0 && breaks[i] <= breaks[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "piecewise: breaks must be finite and increasing");
    }
  }
  auto n = make_node(ExprKind::Piecewise, d);
  n->coord = coord;
  n->breaks = std::move(breaks);
  n->args = std::move(pieces);
  return Expr(std::move(n));
}

int Expr::dim() const { return node_->dim; }
ExprKind Expr::kind() const { return node_->kind; }

namespace {

std::size_t piece_index(const ExprNode& n, double t) {
  std::size_t k = 0;
  while (k < n.breaks.size() && t > n.breaks[k]) ++k;
  return k;
}

double rational_den(const ExprNode& n, const Vector& x) {
  const double q = poly_value(n.den, x);
  if (q == 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "rational: denominator vanishes at the evaluation point");
  }
  return q;
}

}  // namespace

double Expr::evaluate(const Vector& x) const {
  const ExprNode& n = *node_;
  check_same_dim("evaluate", n.dim, x.size());
  switch (n.kind) {
    case ExprKind::Affine:
      return n.a.dot(x) + n.b;
    case ExprKind::Norm2:
      return (x - n.a).norm();
    case ExprKind::Poly:
      return poly_value(n.num, x);
    case ExprKind::Rational:
      return poly_value(n.num, x) / rational_den(n, x);
    case ExprKind::Sum: {
      double s = 0.0;
      for (const auto& c : n.args) s += c.evaluate(x);
      return s;
    }
    case ExprKind::Scale:
      return n.b * n.args[0].evaluate(x);
    case ExprKind::Neg:
      return -n.args[0].evaluate(x);
    case ExprKind::Max: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& c : n.args) m = std::max(m, c.evaluate(x));
      return m;
    }
    case ExprKind::Min: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& c : n.args) m = std::min(m, c.evaluate(x));
      return m;
    }
    case ExprKind::PosPart:
      return std::max(0.0, n.args[0].evaluate(x));
    case ExprKind::Abs:
      return std::abs(n.args[0].evaluate(x));
    case ExprKind::Piecewise:
      return n.args[piece_index(n, x[n.coord])].evaluate(x);
  }
  return 0.0;
}

// --- quasidifferential ------------------------------------------------------

namespace {

struct Local {
  double value;
  QuasiDiff qd;
};

QuasiDiff smooth(const Vector& grad) {
  return {Polytope::point(grad), Polytope::origin(static_cast<int>(grad.size()))};
}

double band(double tol, double at) { return tol * (1.0 + std::abs(at)); }

Local qd_rec(const Expr& e, const Vector& x, const QdOptions& opt) {
  const ExprNode& n = e.node();
  const int d = n.dim;
  switch (n.kind) {
    case ExprKind::Affine:
      return {n.a.dot(x) + n.b, smooth(n.a)};
    case ExprKind::Norm2: {
      const Vector r = x - n.a;
      const double len = r.norm();
      if (len <= opt.activity_tol) {
        return {len, {unit_ball_standin(d), Polytope::origin(d)}};
      }
      return {len, smooth(r / len)};
    }
    case ExprKind::Poly:
      return {poly_value(n.num, x), smooth(poly_gradient(n.num, x))};
    case ExprKind::Rational: {
      const double q = rational_den(n, x);
      const double p = poly_value(n.num, x);
      const Vector g =
          (q * poly_gradient(n.num, x) - p * poly_gradient(n.den, x)) / (q * q);
      return {p / q, smooth(g)};
    }
    case ExprKind::Sum: {
      Local acc = qd_rec(n.args[0], x, opt);
      for (std::size_t i = 1; i < n.args.size(); ++i) {
        Local c = qd_rec(n.args[i], x, opt);
        acc.value += c.value;
        acc.qd = qd_sum(acc.qd, c.qd);
      }
      return acc;
    }
    case ExprKind::Scale: {
      Local c = qd_rec(n.args[0], x, opt);
      return {n.b * c.value, qd_scale(n.b, c.qd)};
    }
    case ExprKind::Neg: {
      Local c = qd_rec(n.args[0], x, opt);
      return {-c.value, qd_neg(c.qd)};
    }
    case ExprKind::Max:
    case ExprKind::Min: {
      const bool is_max = n.kind == ExprKind::Max;
      std::vector<Local> kids;
      for (const auto& c : n.args) kids.push_back(qd_rec(c, x, opt));
      double best = kids[0].value;
      for (const auto& k : kids) {
        best = is_max ? std::max(best, k.value) : std::min(best, k.value);
      }
      const double tol = band(opt.activity_tol, best);
      std::vector<QuasiDiff> active;
      for (auto& k : kids) {
        const bool on = is_max ? k.value >= best - tol : k.value <= best + tol;
        if (on) active.push_back(is_max ? k.qd : qd_neg(k.qd));
      }
      QuasiDiff q = qd_max_active(active);
      return {best, is_max ? q : qd_neg(q)};
    }
    case ExprKind::PosPart: {
      Local c = qd_rec(n.args[0], x, opt);
      return {std::max(0.0, c.value),
              qd_pospart(c.qd, c.value, opt.activity_tol)};
    }
    case ExprKind::Abs: {
      Local c = qd_rec(n.args[0], x, opt);
      return {std::abs(c.value), qd_abs(c.qd, c.value, opt.activity_tol)};
    }
    case ExprKind::Piecewise: {
      const double t = x[n.coord];
      for (double br : n.breaks) {
        if (std::abs(t - br) <= band(opt.activity_tol, br)) {
          throw Error(ErrorCode::NotQuasidifferentiable,
                      "piecewise: point lies on a breakpoint");
        }
      }
      return qd_rec(n.args[piece_index(n, t)], x, opt);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "quasidiff: unknown node");
}

}  // namespace

QuasiDiff quasidiff(const Expr& e, const Vector& x, const QdOptions& opt) {
  check_same_dim("quasidiff", e.dim(), x.size());
  require_finite(x, "quasidiff");
  return qd_rec(e, x, opt).qd;
}

}  // namespace wsharp
