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

#include "wsharp/exhauster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wsharp {

LowerExhauster::LowerExhauster(std::vector<Polytope> members)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "LowerExhauster: empty family");
  }
  for (const auto& m : members_) {
    check_same_dim("LowerExhauster", members_.front().dim(), m.dim());
  }
}

bool LowerExhauster::approx() const {
  return std::any_of(members_.begin(), members_.end(),
                     [](const Polytope& p) { return p.approx(); });
}

double exhauster_eval(const LowerExhauster& e, const Vector& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : e.members()) best = std::min(best, support_value(m, v));
  return best;
}

double exhauster_norm(const LowerExhauster& e, double tol) {
  double worst = 0.0;
  for (const auto& m : e.members()) {
    worst = std::max(worst, min_norm_point(m, tol).distance);
  }
  return worst;
}

LowerExhauster exhauster_from_minmax(
    const std::vector<std::vector<Vector>>& rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::InvalidArgument, "exhauster_from_minmax: no rows");
  }
  std::vector<Polytope> members;
  for (const auto& row : rows) {
    if (row.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "exhauster_from_minmax: empty row");
    }
    members.push_back(canonicalize(Polytope(row)));
  }
  return LowerExhauster(std::move(members));
}

namespace {

std::vector<Polytope> via_quasidiff(const Expr& e, const Vector& x,
                                    const QdOptions& opt) {
  const QuasiDiff q = quasidiff(e, x, opt);
  const Polytope sup = canonicalize(q.sup);
  std::vector<Polytope> out;
  for (const auto& w : sup.vertices()) {
    out.push_back(translate(q.sub, w).with_approx(q.approx()));
  }
  return out;
}

std::vector<Polytope> family(const Expr& e, const Vector& x,
                             const QdOptions& opt) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Min: {
      std::vector<double> vals;
      for (const auto& c : n.args) vals.push_back(c.evaluate(x));
      const double lo = *std::min_element(vals.begin(), vals.end());
      const double band = opt.activity_tol * (1.0 + std::abs(lo));
      std::vector<Polytope> out;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (vals[i] > lo + band) continue;
        auto sub = family(n.args[i], x, opt);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case ExprKind::Sum: {
      std::vector<Polytope> acc = family(n.args[0], x, opt);
      for (std::size_t i = 1; i < n.args.size(); ++i) {
        const auto next = family(n.args[i], x, opt);
        std::vector<Polytope> prod;
        for (const auto& p : acc) {
          for (const auto& q : next) prod.push_back(minkowski_sum(p, q));
        }
        acc = std::move(prod);
      }
      return acc;
    }
    case ExprKind::Scale:
      if (n.b >= 0.0) {
        auto out = family(n.args[0], x, opt);
        for (auto& p : out) p = scale(n.b, p);
        return out;
      }
      return via_quasidiff(e, x, opt);
    default:
      return via_quasidiff(e, x, opt);
  }
}

}  // namespace

LowerExhauster symbolic_exhauster(const Expr& e, const Vector& x,
                                  const QdOptions& opt) {
  check_same_dim("symbolic_exhauster", e.dim(), x.size());
  return LowerExhauster(family(e, x, opt));
}

std::vector<Vector> hadamard_stencil(int dim) {
  if (dim == 2) {
    std::vector<Vector> out;
    for (int k = 0; k < 8; ++k) {
      const double a = std::numbers::pi * k / 4.0;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  return direction_set(dim, 8, kDirectionSeed);
}

namespace {

double hadamard_estimate(const ScalarFn& f, const Vector& x, const Vector& v,
                         const HadamardSchedule& s, bool lower) {
  check_same_dim("hadamard_estimate", x.size(), v.size());
  const double fx = f(x);
  if (!std::isfinite(fx)) {
    throw Error(ErrorCode::InvalidArgument,
                "hadamard_estimate: f is not finite at the base point");
  }
  const auto stencil = hadamard_stencil(static_cast<int>(x.size()));
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> per_scale;
  for (int k = s.k_first; k <= s.k_last; ++k) {
    const double tk = std::ldexp(1.0, -k);
    double ext = lower ? inf : -inf;
    std::vector<Vector> dirs{v};
    for (const auto& u : stencil) dirs.push_back(v + tk * tk * u);
    for (int j = 0; j < s.steps_per_scale; ++j) {
      const double t =
          tk * (1.0 + static_cast<double>(j) / std::max(1, s.steps_per_scale - 1));
      for (const auto& d : dirs) {
        double q = (f(x + t * d) - fx) / t;
        if (std::isnan(q)) q = lower ? -inf : inf;
        ext = lower ? std::min(ext, q) : std::max(ext, q);
      }
    }
    per_scale.push_back(ext);
  }
  // Tail extrema over the finer scales are monotone in k.
  double best = lower ? -inf : inf;
  for (std::size_t k = 0; k < per_scale.size(); ++k) {
    double tail = per_scale[k];
    for (std::size_t j = k; j < per_scale.size(); ++j) {
      tail = lower ? std::min(tail, per_scale[j]) : std::max(tail, per_scale[j]);
    }
    best = lower ? std::max(best, tail) : std::min(best, tail);
  }
  return best;
}

}  // namespace

double hadamard_lower_estimate(const ScalarFn& f, const Vector& x,
                               const Vector& v, const HadamardSchedule& s) {
  return hadamard_estimate(f, x, v, s, true);
}

double hadamard_upper_estimate(const ScalarFn& f, const Vector& x,
                               const Vector& v, const HadamardSchedule& s) {
  return hadamard_estimate(f, x, v, s, false);
}

}  // namespace wsharp
