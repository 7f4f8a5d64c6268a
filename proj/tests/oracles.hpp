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

// Reference computations written independently of the library code paths.
// They favour brute force over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wsharp/qdcalc.hpp"

namespace oracle {

using wsharp::Expr;
using wsharp::Monomial;
using wsharp::Polytope;
using wsharp::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector scalar(double x) { return Vector::Constant(1, x); }

inline Polytope poly(std::initializer_list<std::initializer_list<double>> pts) {
  std::vector<Vector> v;
  for (const auto& p : pts) v.push_back(vec(p));
  return Polytope(std::move(v));
}

// Minimizes |p + t (q - p)| by evaluating 200001 evenly spaced t in [0, 1].
inline std::pair<double, double> segment_sweep(const Vector& p, const Vector& q) {
  double best = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  constexpr int kSteps = 200000;
  for (int k = 0; k <= kSteps; ++k) {
    const double t = static_cast<double>(k) / kSteps;
    const double d = (p + t * (q - p)).norm();
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  return {best, best_t};
}

// Closed-form distance from the origin to segment [p, q].
inline double segment_distance(const Vector& p, const Vector& q) {
  const Vector d = q - p;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return p.norm();
  const double t = std::clamp(-p.dot(d) / len2, 0.0, 1.0);
  return (p + t * d).norm();
}

inline double cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
inline std::vector<Vector> hull2d(std::vector<Vector> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vector& a, const Vector& b) { return a == b; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vector> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

// Distance from the origin to conv(pts) in 1D or 2D without any iterative
// solver: inside test on the hull, otherwise the nearest hull edge.
inline double hull_distance(const std::vector<Vector>& pts) {
  if (pts.front().size() == 1) {
    double lo = pts.front()[0], hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (lo <= 0.0 && 0.0 <= hi) return 0.0;
    return std::min(std::abs(lo), std::abs(hi));
  }
  const auto h = hull2d(pts);
  if (h.size() == 1) return h[0].norm();
  if (h.size() == 2) return segment_distance(h[0], h[1]);
  const Vector o = Vector::Zero(2);
  bool inside = true;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (cross(h[i], h[(i + 1) % h.size()], o) < 0) inside = false;
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    best = std::min(best, segment_distance(h[i], h[(i + 1) % h.size()]));
  }
  return best;
}

inline double support(const std::vector<Vector>& pts, const Vector& v) {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) s = std::max(s, p.dot(v));
  return s;
}

// Clarke subdifferential at 0 of phi(v) = s(v|A) - s(v|B) for point sets
// on the line. phi is linear on each half-line, so the only breakpoint is
// 0 and the subdifferential is the hull of the two one-sided slopes.
inline std::pair<double, double> clarke_1d(const std::vector<Vector>& a,
                                           const std::vector<Vector>& b) {
  const auto phi = [&](double v) {
    return support(a, scalar(v)) - support(b, scalar(v));
  };
  const double right = phi(1.0);
  const double left = -phi(-1.0);
  return {std::min(left, right), std::max(left, right)};
}

// Closed intervals and the operations the interval cases need.
struct Interval {
  double lo, hi;
};
inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval scaled(double s, Interval a) {
  return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}
inline double dist0(Interval a) {
  if (a.lo <= 0 && 0 <= a.hi) return 0.0;
  return std::min(std::abs(a.lo), std::abs(a.hi));
}

// One-sided derivative along v with Richardson extrapolation over t, t/2.
template <class F>
double richardson(const F& f, const Vector& x, const Vector& v, double t = 1e-4) {
  const double fx = f(x);
  const double d1 = (f(Vector(x + t * v)) - fx) / t;
  const double d2 = (f(Vector(x + 0.5 * t * v)) - fx) / (0.5 * t);
  return 2.0 * d2 - d1;
}

// Random polytope with 1..max_vertices vertices in [-scale, scale]^dim.
inline Polytope random_polytope(std::mt19937_64& rng, int dim, int max_vertices,
                                double scale = 1.0) {
  std::uniform_int_distribution<int> count(1, max_vertices);
  std::uniform_real_distribution<double> u(-scale, scale);
  const int n = count(rng);
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) {
    Vector p(dim);
    for (int k = 0; k < dim; ++k) p[k] = u(rng);
    pts.push_back(p);
  }
  return Polytope(std::move(pts));
}

// Convex combinations of the vertices of p, so the result sits inside p.
inline Polytope random_subpolytope(std::mt19937_64& rng, const Polytope& p,
                                   int count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) {
    Vector w(static_cast<Eigen::Index>(p.size()));
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = u(rng);
    w /= w.sum();
    Vector x = Vector::Zero(p.dim());
    for (std::size_t k = 0; k < p.size(); ++k) x += w[static_cast<Eigen::Index>(k)] * p.vertex(k);
    pts.push_back(x);
  }
  return Polytope(std::move(pts));
}

struct CorpusEntry {
  std::string name;
  Expr e;
  Vector lo, hi;
  // Points where every branch switch happens, so finite differences taken
  // from a sample point never cross a kink.
  std::vector<double> kinks;
};

inline Expr x0(int dim) { return Expr::coordinate(dim, 0); }
inline Expr x1(int dim) { return Expr::coordinate(dim, 1); }
inline Expr affine1(double a, double b) { return Expr::affine(scalar(a), b); }
inline Expr affine2(double a0, double a1, double b) {
  return Expr::affine(vec({a0, a1}), b);
}

// Functions of one or two variables with kinks only on the half-integer
// lattice, used by the derivative, slope and Fermat property tests.
inline std::vector<CorpusEntry> corpus() {
  const Vector lo1 = scalar(-2), hi1 = scalar(2);
  const Vector lo2 = vec({-2, -2}), hi2 = vec({2, 2});
  std::vector<CorpusEntry> c;
  c.push_back({"abs", Expr::abs(x0(1)), lo1, hi1, {0}});
  c.push_back({"neg_abs_plus_2", Expr::sum({Expr::neg(Expr::abs(x0(1))), Expr::constant(1, 2)}), lo1, hi1, {0}});
  c.push_back({"abs_abs_minus_one", Expr::abs(Expr::sum({Expr::abs(x0(1)), Expr::constant(1, -1)})), lo1, hi1, {0, 1, -1}});
  c.push_back({"max3_affine", Expr::max({affine1(1, 0), affine1(-2, 0), affine1(0.5, 0.5)}), lo1, hi1, {0, 1}});
  c.push_back({"min2_affine", Expr::min({affine1(1, 1), affine1(-1, 1)}), lo1, hi1, {0}});
  c.push_back({"pospart_shift", Expr::pospart(affine1(1, -0.5)), lo1, hi1, {0.5}});
  c.push_back({"square", Expr::poly(1, {{1.0, {2}}}), lo1, hi1, {}});
  c.push_back({"cubic", Expr::poly(1, {{1.0, {3}}, {-1.0, {1}}}), lo1, hi1, {}});
  c.push_back({"abs_plus_square", Expr::sum({Expr::abs(x0(1)), Expr::poly(1, {{0.5, {2}}})}), lo1, hi1, {0}});
  c.push_back({"scaled_abs", Expr::scale(-1.5, Expr::abs(affine1(2, -1))), lo1, hi1, {0.5}});
  c.push_back({"max_abs_square", Expr::max({Expr::abs(x0(1)), Expr::poly(1, {{1.0, {2}}})}), lo1, hi1, {0, 1, -1}});
  c.push_back({"rational", Expr::rational(1, {{1.0, {2}}, {1.0, {0}}}, {{1.0, {2}}, {2.0, {0}}}), lo1, hi1, {}});
  c.push_back({"l1_2d", Expr::sum({Expr::abs(x0(2)), Expr::abs(x1(2))}), lo2, hi2, {0}});
  c.push_back({"linf_2d", Expr::max({x0(2), Expr::neg(x0(2)), x1(2), Expr::neg(x1(2))}), lo2, hi2, {0}});
  c.push_back({"norm2_2d", Expr::norm2(2), lo2, hi2, {0}});
  c.push_back({"norm2_shifted", Expr::norm2(2, vec({0.5, -0.5})), lo2, hi2, {0.5, -0.5}});
  c.push_back({"min_affine_2d", Expr::min({affine2(1, 0, 0), affine2(0, 1, 0), affine2(-1, -1, 0)}), lo2, hi2, {0}});
  c.push_back({"max_affine_2d", Expr::max({affine2(1, 1, 0), affine2(-1, 0, 0.5), affine2(0, -1, 0)}), lo2, hi2, {0, 0.5}});
  c.push_back({"abs_diff_2d", Expr::abs(affine2(1, -1, 0)), lo2, hi2, {0}});
  c.push_back({"quadratic_2d", Expr::poly(2, {{1.0, {2, 0}}, {2.0, {0, 2}}, {0.5, {1, 1}}}), lo2, hi2, {}});
  c.push_back({"pospart_sum_2d", Expr::sum({Expr::pospart(affine2(1, 0, -0.5)), Expr::abs(x1(2))}), lo2, hi2, {0, 0.5}});
  c.push_back({"neg_norm_plus_max", Expr::sum({Expr::max({x0(2), x1(2)}), Expr::neg(Expr::abs(x0(2)))}), lo2, hi2, {0}});
  c.push_back({"dc_2d", Expr::sum({Expr::abs(x0(2)), Expr::neg(Expr::abs(x1(2))), Expr::poly(2, {{1.0, {0, 2}}})}), lo2, hi2, {0}});
  return c;
}

}  // namespace oracle
