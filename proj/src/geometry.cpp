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

#include "wsharp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wsharp {
namespace {

double coord_scale(const std::vector<Vector>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

void sort_unique(std::vector<Vector>& pts, double eps) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (auto& p : pts) {
    bool dup = false;
    // Near-duplicates need not be adjacent after a lexicographic sort, but
    // they sit within a short window of equal leading coordinates.
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (p[0] - (*it)[0] > eps) break;
      if ((p - *it).lpNorm<Eigen::Infinity>() <= eps) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  pts = std::move(out);
}

double cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Vector> hull_2d(std::vector<Vector> pts) {
  const double scale = std::max(coord_scale(pts), 1e-300);
  sort_unique(pts, 1e-14 * scale);
  if (pts.size() <= 2) return pts;
  const double eps = 1e-13 * scale * scale;
  std::vector<Vector> h;
  h.reserve(2 * pts.size());
  for (const auto& p : pts) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) <= eps) {
      h.pop_back();
    }
    h.push_back(p);
  }
  const std::size_t lower = h.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (h.size() >= lower && cross(h[h.size() - 2], h.back(), *it) <= eps) {
      h.pop_back();
    }
    h.push_back(*it);
  }
  h.pop_back();
  return h;
}

std::vector<Vector> hull_1d(const std::vector<Vector>& pts) {
  double lo = pts.front()[0];
  double hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  if (hi - lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi))) {
    return {Vector::Constant(1, lo)};
  }
  return {Vector::Constant(1, lo), Vector::Constant(1, hi)};
}

std::vector<Vector> prune_nd(std::vector<Vector> pts) {
  const double scale = std::max(coord_scale(pts), 1e-300);
  sort_unique(pts, 1e-14 * scale);
  if (pts.size() <= 2) return pts;
  const int dim = static_cast<int>(pts.front().size());

  // Unique maximizers in probe directions are certainly extreme.
  std::vector<char> extreme(pts.size(), 0);
  std::vector<Vector> probes = direction_set(dim, 16 * dim, kDirectionSeed);
  for (int i = 0; i < dim; ++i) {
    probes.push_back(Vector::Unit(dim, i));
    probes.push_back(-Vector::Unit(dim, i));
  }
  const Polytope all(pts);
  for (const auto& d : probes) {
    const Maximizer m = argmax_vertex(all, d, 1e-12 * (1.0 + scale));
    if (m.unique) extreme[m.index] = 1;
  }

  std::vector<char> alive(pts.size(), 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (extreme[i]) continue;
    std::vector<Vector> others;
    others.reserve(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i && alive[j]) others.push_back(pts[j] - pts[i]);
    }
    if (others.empty()) continue;
    const MinNormPoint mn = min_norm_point(Polytope(std::move(others)));
    if (mn.distance <= 1e-10 * (1.0 + scale)) alive[i] = 0;
  }
  std::vector<Vector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (alive[i]) out.push_back(std::move(pts[i]));
  }
  return out;
}

bool any_approx(std::span<const Polytope> ps) {
  return std::any_of(ps.begin(), ps.end(),
                     [](const Polytope& p) { return p.approx(); });
}

}  // namespace

void require_finite(const Vector& v, const char* where) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(where) + ": non-finite coordinate");
  }
}

Polytope::Polytope(std::vector<Vector> vertices, bool canonical, bool approx)
    : vertices_(std::move(vertices)), canonical_(canonical), approx_(approx) {
  if (vertices_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "Polytope: empty vertex list");
  }
  const auto d = vertices_.front().size();
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "Polytope: zero dim");
  for (const auto& v : vertices_) {
    check_same_dim("Polytope", d, v.size());
    require_finite(v, "Polytope");
  }
}

Polytope Polytope::point(const Vector& p) { return Polytope({p}, true); }

Polytope Polytope::origin(int dim) {
  return Polytope({Vector::Zero(dim)}, true);
}

Polytope Polytope::interval(double lo, double hi) {
  return canonicalize(
      Polytope({Vector::Constant(1, lo), Vector::Constant(1, hi)}));
}

Polytope Polytope::with_approx(bool approx) const {
  Polytope out = *this;
  out.approx_ = approx;
  return out;
}

double support_value(const Polytope& p, const Vector& v) {
  check_same_dim("support_value", p.dim(), v.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : p.vertices()) best = std::max(best, x.dot(v));
  return best;
}

Maximizer argmax_vertex(const Polytope& p, const Vector& v, double tie_tol) {
  check_same_dim("argmax_vertex", p.dim(), v.size());
  Maximizer m;
  m.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = p.vertex(i).dot(v);
    if (s > m.value) {
      m.value = s;
      m.index = i;
    }
  }
  const Vector& best = p.vertex(m.index);
  const double same = 1e-13 * (1.0 + best.lpNorm<Eigen::Infinity>());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == m.index) continue;
    if (p.vertex(i).dot(v) >= m.value - tie_tol &&
        (p.vertex(i) - best).lpNorm<Eigen::Infinity>() > same) {
      m.unique = false;
      break;
    }
  }
  return m;
}

ExposedFace exposed_vertices(const Polytope& p, const Vector& v,
                             double tie_tol) {
  if (!(tie_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "exposed_vertices: tie_tol must be nonnegative");
  }
  const Maximizer m = argmax_vertex(p, v, tie_tol);
  ExposedFace face;
  for (const auto& x : p.vertices()) {
    if (x.dot(v) >= m.value - tie_tol) face.vertices.push_back(x);
  }
  face.tie = !m.unique;
  return face;
}

Polytope canonicalize(const Polytope& p) {
  if (p.canonical()) return p;
  std::vector<Vector> pts = p.vertices();
  switch (p.dim()) {
    case 1:
      pts = hull_1d(pts);
      break;
    case 2:
      pts = hull_2d(std::move(pts));
      break;
    default:
      pts = prune_nd(std::move(pts));
  }
  return Polytope(std::move(pts), true, p.approx());
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  check_same_dim("minkowski_sum", p.dim(), q.dim());
  std::vector<Vector> pts;
  pts.reserve(p.size() * q.size());
  for (const auto& a : p.vertices()) {
    for (const auto& b : q.vertices()) pts.push_back(a + b);
  }
  return canonicalize(Polytope(std::move(pts), false,
                               p.approx() || q.approx()));
}

Polytope minkowski_sum(std::span<const Polytope> ps) {
  if (ps.empty()) {
    throw Error(ErrorCode::InvalidArgument, "minkowski_sum: empty list");
  }
  Polytope acc = canonicalize(ps.front());
  for (std::size_t i = 1; i < ps.size(); ++i) acc = minkowski_sum(acc, ps[i]);
  return acc;
}

Polytope scale(double alpha, const Polytope& p) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "scale: non-finite factor");
  }
  if (alpha == 0.0) return Polytope::origin(p.dim()).with_approx(false);
  std::vector<Vector> pts;
  pts.reserve(p.size());
  for (const auto& v : p.vertices()) pts.push_back(alpha * v);
  return Polytope(std::move(pts), p.canonical(), p.approx());
}

Polytope reflect(const Polytope& p) { return scale(-1.0, p); }

Polytope translate(const Polytope& p, const Vector& shift) {
  check_same_dim("translate", p.dim(), shift.size());
  std::vector<Vector> pts;
  pts.reserve(p.size());
  for (const auto& v : p.vertices()) pts.push_back(v + shift);
  return Polytope(std::move(pts), p.canonical(), p.approx());
}

Polytope conv_union(std::span<const Polytope> ps) {
  if (ps.empty()) {
    throw Error(ErrorCode::InvalidArgument, "conv_union: empty list");
  }
  std::vector<Vector> pts;
  for (const auto& p : ps) {
    check_same_dim("conv_union", ps.front().dim(), p.dim());
    pts.insert(pts.end(), p.vertices().begin(), p.vertices().end());
  }
  return canonicalize(Polytope(std::move(pts), false, any_approx(ps)));
}

Polytope conv_union(const Polytope& p, const Polytope& q) {
  const Polytope both[] = {p, q};
  return conv_union(both);
}

MinNormPoint min_norm_point(const Polytope& poly, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_norm_point: tol must be > 0");
  }
  const auto& pts = poly.vertices();
  const std::size_t m = pts.size();
  const int dim = poly.dim();

  std::vector<double> norms(m);
  for (std::size_t i = 0; i < m; ++i) norms[i] = pts[i].norm();

  // Corral: active vertex indices with convex weights.
  std::vector<std::size_t> corral;
  std::vector<double> weight;
  {
    const auto it = std::min_element(norms.begin(), norms.end());
    corral.push_back(static_cast<std::size_t>(it - norms.begin()));
    weight.push_back(1.0);
  }
  Vector x = pts[corral[0]];

  const long cap = std::max<long>(1, 10L * static_cast<long>(m) * dim);
  int iter = 0;
  for (;; ++iter) {
    // Optimality: <x, q - x> >= -tol (1 + |q|) for every vertex q.
    const double xx = x.squaredNorm();
    std::size_t entering = m;
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double slack = pts[i].dot(x) - xx + tol * (1.0 + norms[i]);
      if (slack < worst) {
        worst = slack;
        entering = i;
      }
    }
    if (entering == m) break;
    if (std::find(corral.begin(), corral.end(), entering) != corral.end()) {
      // Roundoff floor: the entering vertex is already in the corral.
      break;
    }
    if (iter >= cap) {
      throw Error(ErrorCode::Convergence,
                  "min_norm_point: iteration cap " + std::to_string(cap) +
                      " reached");
    }
    corral.push_back(entering);
    weight.push_back(0.0);

    for (;;) {
      // Affine minimizer of the corral: min |s0 + D b|, alpha0 = 1 - sum b.
      const std::size_t k = corral.size();
      Vector alpha(static_cast<Eigen::Index>(k));
      if (k == 1) {
        alpha[0] = 1.0;
      } else {
        Eigen::MatrixXd d(dim, static_cast<Eigen::Index>(k - 1));
        for (std::size_t j = 1; j < k; ++j) {
          d.col(static_cast<Eigen::Index>(j - 1)) =
              pts[corral[j]] - pts[corral[0]];
        }
        const Vector b = d.completeOrthogonalDecomposition().solve(
            -pts[corral[0]]);
        alpha[0] = 1.0 - b.sum();
        alpha.tail(static_cast<Eigen::Index>(k - 1)) = b;
      }
      if ((alpha.array() > 1e-14).all()) {
        for (std::size_t j = 0; j < k; ++j) weight[j] = alpha[j];
        break;
      }
      double theta = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (alpha[j] <= 1e-14) {
          const double denom = weight[j] - alpha[j];
          if (denom > 0.0) theta = std::min(theta, weight[j] / denom);
        }
      }
      for (std::size_t j = 0; j < k; ++j) {
        weight[j] = theta * alpha[j] + (1.0 - theta) * weight[j];
      }
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_w;
      for (std::size_t j = 0; j < k; ++j) {
        if (weight[j] > 1e-14) {
          keep_idx.push_back(corral[j]);
          keep_w.push_back(weight[j]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(corral.back());
        keep_w.push_back(1.0);
      }
      const double total = std::accumulate(keep_w.begin(), keep_w.end(), 0.0);
      for (auto& w : keep_w) w /= total;
      corral = std::move(keep_idx);
      weight = std::move(keep_w);
      if (corral.size() == 1) break;
    }
    x.setZero(dim);
    for (std::size_t j = 0; j < corral.size(); ++j) {
      x += weight[j] * pts[corral[j]];
    }
  }

  MinNormPoint out;
  out.point = x;
  out.distance = x.norm();
  if (out.distance <= tol) out.distance = 0.0;
  out.iterations = iter;
  return out;
}

double distance_to(const Polytope& p, const Vector& x, double tol) {
  check_same_dim("distance_to", p.dim(), x.size());
  return min_norm_point(translate(p, -x), tol).distance;
}

const char* to_string(SetRelation r) {
  switch (r) {
    case SetRelation::Equal:
      return "equal";
    case SetRelation::Subset:
      return "subset";
    case SetRelation::Superset:
      return "superset";
    case SetRelation::Incomparable:
      return "incomparable";
  }
  return "?";
}

SetComparison set_compare(const Polytope& p, const Polytope& q, double tol) {
  check_same_dim("set_compare", p.dim(), q.dim());
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "set_compare: tol must be >= 0");
  }
  double p_out = 0.0;  // max excess of p over q
  double q_out = 0.0;
  if (p.dim() <= 2) {
    // Distance to a convex set is convex, so the one-sided Hausdorff
    // excess is attained at a vertex.
    const Polytope cp = canonicalize(p);
    const Polytope cq = canonicalize(q);
    const double inner = std::min(kMinNormTol, std::max(tol, 1e-15));
    for (const auto& v : cp.vertices()) {
      p_out = std::max(p_out, distance_to(cq, v, inner));
    }
    for (const auto& v : cq.vertices()) {
      q_out = std::max(q_out, distance_to(cp, v, inner));
    }
  } else {
    for (const auto& d :
         direction_set(p.dim(), kCompareDirections, kDirectionSeed)) {
      const double gap = support_value(p, d) - support_value(q, d);
      p_out = std::max(p_out, gap);
      q_out = std::max(q_out, -gap);
    }
  }
  SetComparison c;
  c.hausdorff = std::max(p_out, q_out);
  const bool p_in_q = p_out <= tol;
  const bool q_in_p = q_out <= tol;
  if (p_in_q && q_in_p) {
    c.relation = SetRelation::Equal;
  } else if (p_in_q) {
    c.relation = SetRelation::Subset;
  } else if (q_in_p) {
    c.relation = SetRelation::Superset;
  } else {
    c.relation = SetRelation::Incomparable;
  }
  return c;
}

}  // namespace wsharp
