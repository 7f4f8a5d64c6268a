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

#include "wsharp/demyanov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace wsharp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Angles of the directions whose max-face is an edge.
void edge_normal_angles(const Polytope& p, std::vector<double>& out) {
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  if (n < 2) return;
  // Canonical 2D vertex lists are counter-clockwise; a segment is the
  // degenerate two-vertex cycle and contributes both of its normals.
  for (std::size_t i = 0; i < n; ++i) {
    const Vector e = v[(i + 1) % n] - v[i];
    out.push_back(wrap_angle(std::atan2(-e[0], e[1])));
  }
}

DemyanovResult exact_1d(const Polytope& a, const Polytope& b) {
  const Vector up = Vector::Constant(1, 1.0);
  const Vector down = Vector::Constant(1, -1.0);
  const double hi = support_value(a, up) - support_value(b, up);
  const double lo = -support_value(a, down) + support_value(b, down);
  DemyanovResult r{Polytope::interval(std::min(lo, hi), std::max(lo, hi)),
                   DemyanovBackend::Exact1d, 0, 0};
  return r;
}

DemyanovResult exact_2d(const Polytope& a_in, const Polytope& b_in,
                        const DemyanovOptions& opt) {
  const Polytope a = canonicalize(a_in);
  const Polytope b = canonicalize(b_in);
  std::vector<double> angles;
  edge_normal_angles(a, angles);
  edge_normal_angles(b, angles);
  std::sort(angles.begin(), angles.end());

  std::vector<double> cuts;
  for (double t : angles) {
    if (cuts.empty() || t - cuts.back() > opt.arc_merge) cuts.push_back(t);
  }
  if (cuts.size() > 1 && cuts.front() + kTwoPi - cuts.back() <= opt.arc_merge) {
    cuts.pop_back();
  }

  std::vector<double> mids;
  if (cuts.empty()) {
    mids.push_back(0.0);
  } else {
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const double next =
          k + 1 < cuts.size() ? cuts[k + 1] : cuts.front() + kTwoPi;
      mids.push_back(0.5 * (cuts[k] + next));
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (double t : mids) {
    Vector d(2);
    d << std::cos(t), std::sin(t);
    pairs.emplace(argmax_vertex(a, d, 0.0).index,
                  argmax_vertex(b, d, 0.0).index);
  }
  std::vector<Vector> diffs;
  for (const auto& [i, j] : pairs) diffs.push_back(a.vertex(i) - b.vertex(j));
  return {canonicalize(Polytope(std::move(diffs))), DemyanovBackend::Exact2d,
          0, 0};
}

// Exposed vertex pair for one direction; ok is false on a tie.
struct Exposure {
  std::size_t ia = 0, ib = 0;
  bool ok = false;
  bool operator==(const Exposure&) const = default;
};

class SampledDiff {
 public:
  SampledDiff(const Polytope& a, const Polytope& b, double tie_rel)
      : a_(a), b_(b), tie_rel_(tie_rel) {}

  Exposure classify(const Vector& d) const {
    const double sa = support_value(a_, d);
    const double sb = support_value(b_, d);
    const Maximizer ma = argmax_vertex(a_, d, tie_rel_ * (1.0 + std::abs(sa)));
    const Maximizer mb = argmax_vertex(b_, d, tie_rel_ * (1.0 + std::abs(sb)));
    return {ma.index, mb.index, ma.unique && mb.unique};
  }

  void record(const Exposure& e) {
    if (e.ok) pairs_.emplace(e.ia, e.ib);
  }

  // The directions exposing a fixed pair form a convex cone, so an arc
  // whose ends expose the same pair stays inside it. Otherwise split.
  void refine(const Vector& u, const Exposure& eu, const Vector& w,
              const Exposure& ew, int depth) {
    if ((eu.ok && eu == ew) || depth == 0) return;
    const Vector mid = u + w;
    const double n = mid.norm();
    if (n < 1e-6 || (u - w).norm() < 1e-12) return;
    const Vector m = mid / n;
    const Exposure em = classify(m);
    record(em);
    refine(u, eu, m, em, depth - 1);
    refine(m, em, w, ew, depth - 1);
  }

  const std::set<std::pair<std::size_t, std::size_t>>& pairs() const {
    return pairs_;
  }

 private:
  const Polytope& a_;
  const Polytope& b_;
  double tie_rel_;
  std::set<std::pair<std::size_t, std::size_t>> pairs_;
};

// Bisection depth along the sample chain; 40 halvings resolve arcs far
// below the 1e-9 tie band.
constexpr int kRefineDepth = 40;

DemyanovResult sampled(const Polytope& a_in, const Polytope& b_in,
                       const DemyanovOptions& opt) {
  const Polytope a = canonicalize(a_in);
  const Polytope b = canonicalize(b_in);
  SampledDiff diff(a, b, opt.tie_rel);
  const auto dirs = direction_set(a.dim(), opt.sample_count, opt.seed);
  std::vector<Exposure> seen(dirs.size());
  int skipped = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    seen[k] = diff.classify(dirs[k]);
    if (!seen[k].ok) ++skipped;
    diff.record(seen[k]);
  }
  // In the plane consecutive samples are in angle order, so the closed
  // chain sweeps the whole circle. Higher dims have no such order and the
  // bisection would wander, so they keep the plain samples.
  if (opt.refine && a.dim() == 2 && dirs.size() > 1) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const std::size_t next = (k + 1) % dirs.size();
      diff.refine(dirs[k], seen[k], dirs[next], seen[next], kRefineDepth);
    }
  }
  if (diff.pairs().empty()) {
    throw Error(ErrorCode::Convergence,
                "demyanov_diff: every sampled direction hit a tie");
  }
  std::vector<Vector> diffs;
  for (const auto& [i, j] : diff.pairs()) diffs.push_back(a.vertex(i) - b.vertex(j));
  return {canonicalize(Polytope(std::move(diffs))), DemyanovBackend::Sampled,
          opt.sample_count, skipped};
}

}  // namespace

const char* to_string(DemyanovBackend b) {
  switch (b) {
    case DemyanovBackend::Exact1d:
      return "exact1d";
    case DemyanovBackend::Exact2d:
      return "exact2d";
    case DemyanovBackend::Sampled:
      return "sampled";
  }
  return "?";
}

DemyanovResult demyanov_diff(const Polytope& a, const Polytope& b,
                             const DemyanovOptions& opt) {
  check_same_dim("demyanov_diff", a.dim(), b.dim());
  if (opt.sample_count < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "demyanov_diff: sample_count must be positive");
  }
  DemyanovResult r = opt.force_sampled || a.dim() >= 3 ? sampled(a, b, opt)
                     : a.dim() == 1                   ? exact_1d(a, b)
                                                      : exact_2d(a, b, opt);
  r.set = r.set.with_approx(a.approx() || b.approx());
  return r;
}

DemyanovResult demcoqd(const QuasiDiff& q, const DemyanovOptions& opt) {
  return demyanov_diff(q.sub, reflect(q.sup), opt);
}

DemyanovResult demcoqd(const Expr& e, const Vector& x,
                       const DemyanovOptions& opt, const QdOptions& qopt) {
  return demcoqd(quasidiff(e, x, qopt), opt);
}

}  // namespace wsharp
