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

#include "wsharp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "certify_internal.hpp"

namespace wsharp {

using detail::kInf;

ProblemInstance::ProblemInstance(Expr objective_, Vector lo_, Vector hi_,
                                 int resolution_)
    : objective(std::move(objective_)),
      lo(std::move(lo_)),
      hi(std::move(hi_)),
      resolution(resolution_) {}

void ProblemInstance::validate() const {
  const int n = dim();
  check_same_dim("problem box", n, lo.size());
  check_same_dim("problem box", n, hi.size());
  if (g) check_same_dim("constraint g", n, g->dim());
  if (h) check_same_dim("constraint h", n, h->dim());
  if (polyhedron) {
    if (polyhedron->normals.size() != polyhedron->offsets.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "polyhedron: normals and offsets differ in length");
    }
    for (const auto& c : polyhedron->normals) {
      check_same_dim("polyhedron row", n, c.size());
      require_finite(c, "polyhedron row");
    }
  }
  for (const auto& o : exhauster) {
    if (o.at) check_same_dim("exhauster point", n, o.at->size());
    for (const auto& m : o.members) check_same_dim("exhauster member", n, m.dim());
  }
  for (const auto& x : slope_at) check_same_dim("slope point", n, x.size());
  if (tol.argmin && !(*tol.argmin > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "argmin_tol must be positive");
  }
  if (!(tol.tie >= 0.0) || !(tol.feasibility >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be nonnegative");
  }
  Grid(lo, hi, resolution);  // box and resolution checks
}

bool ProblemInstance::feasible(const Vector& x) const {
  if (g && !(g->evaluate(x) <= tol.feasibility)) return false;
  if (h && !(std::abs(h->evaluate(x)) <= tol.feasibility)) return false;
  if (polyhedron) {
    for (std::size_t i = 0; i < polyhedron->normals.size(); ++i) {
      if (!(polyhedron->normals[i].dot(x) <= polyhedron->offsets[i] +
                                                tol.feasibility)) {
        return false;
      }
    }
  }
  return true;
}

ArgminResult detect_argmin(const ProblemInstance& p, const Grid& grid,
                           bool constrained) {
  ArgminResult a;
  a.values.resize(grid.size());
  a.feasible.assign(grid.size(), 1);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vector x = grid.point(i);
    a.values[i] = p.objective.evaluate(x);
    if (constrained) a.feasible[i] = p.feasible(x) ? 1 : 0;
  });
  double inf = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(a.values[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "objective is not finite at grid point " +
                      detail::format_point(grid.point(i)));
    }
    if (a.feasible[i]) inf = std::min(inf, a.values[i]);
  }
  if (inf == kInf) {
    throw Error(ErrorCode::Precondition, "no feasible grid point");
  }
  a.inf_f_hat = inf;
  a.tol = p.tol.argmin.value_or(1e-6 * (1.0 + std::abs(inf)));
  a.member.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (a.feasible[i] && a.values[i] <= inf + a.tol) {
      a.member[i] = 1;
      ++a.count;
    }
  }
  return a;
}

WsharpCheck verify_wsharp_inequality(const ProblemInstance& p,
                                     const Grid& grid, const ArgminResult& a,
                                     double sigma) {
  (void)p;
  WsharpCheck wc;
  wc.dist = grid_distance_to_set(grid, a.member);
  wc.sigma_hat = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!a.feasible[i] || a.member[i]) continue;
    const double gap = a.values[i] - a.inf_f_hat;
    wc.sigma_hat = std::min(wc.sigma_hat, gap / wc.dist[i]);
    const double lhs = sigma * wc.dist[i];
    const double rhs = gap + a.tol;
    if (lhs > rhs) {
      ++wc.violation_count;
      if (wc.violations.size() < kMaxListed) {
        wc.violations.push_back({detail::to_std(grid.point(i)), lhs, rhs});
      }
    }
  }
  if (!std::isfinite(sigma)) return wc;

  // Sublevel form at a few levels just above the grid infimum. A grid level
  // set can sit up to half a cell inside the true one, hence the extra slack.
  double half_diag = 0.0;
  for (int k = 0; k < grid.dim(); ++k) half_diag += grid.step(k) * grid.step(k);
  half_diag = 0.5 * std::sqrt(half_diag);
  for (double m : {1.0, 10.0, 100.0}) {
    const double alpha = a.inf_f_hat + m * a.tol;
    std::vector<char> level(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      level[i] = a.feasible[i] && a.values[i] <= alpha;
    }
    const auto dl = grid_distance_to_set(grid, level);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!a.feasible[i] || level[i]) continue;
      if (sigma * dl[i] > a.values[i] - alpha + a.tol + sigma * half_diag) {
        ++wc.sublevel_violations;
      }
    }
  }
  return wc;
}

double strong_slope_estimate(const ScalarFn& f, const Vector& x,
                             const SlopeSchedule& s, std::uint64_t seed) {
  const double fx = f(x);
  if (!std::isfinite(fx)) {
    throw Error(ErrorCode::InvalidArgument,
                "strong_slope_estimate: f is not finite at the base point");
  }
  const int n = static_cast<int>(x.size());
  std::vector<Vector> dirs;
  if (n == 1) {
    dirs = {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  } else if (n == 2) {
    const int m = s.directions > 0 ? s.directions : 256;
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * k / m;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      dirs.push_back(u);
    }
  } else {
    dirs = direction_set(n, s.directions > 0 ? s.directions : 512, seed);
  }

  // Orthonormal tangent frame at u for the direction polish below.
  const auto tangents = [n](const Vector& u) {
    std::vector<Vector> t;
    for (int i = 0; i < n && static_cast<int>(t.size()) < n - 1; ++i) {
      Vector e = Vector::Unit(n, i);
      e -= e.dot(u) * u;
      for (const auto& b : t) e -= e.dot(b) * b;
      if (e.norm() > 1e-8) t.push_back(e.normalized());
    }
    return t;
  };
  const double spacing =
      n == 1 ? 0.0 : 2.0 * std::numbers::pi / static_cast<double>(dirs.size());

  const double drop_tol = 1e-14 * (1.0 + std::abs(fx));
  bool decrease_seen = false;
  double finest = -kInf;
  const int k_first = s.k_last - std::max(1, s.tail_scales) + 1;
  Vector y(n);
  for (int k = k_first; k <= s.k_last; ++k) {
    const double rk = std::ldexp(1.0, -k);
    double best = -kInf;
    for (int j = 0; j < s.steps_per_scale; ++j) {
      const double r =
          rk * (1.0 + static_cast<double>(j) / std::max(1, s.steps_per_scale - 1));
      double best_r = -kInf;
      const Vector* best_u = &dirs.front();
      for (const auto& u : dirs) {
        y = x + r * u;
        const double fy = f(y);
        if (std::isnan(fy)) return kInf;
        const double q = (fx - fy) / r;
        if (std::isinf(q) && q > 0) return kInf;
        if (q > best_r) {
          best_r = q;
          best_u = &u;
        }
        if (k >= s.k_last - 1 && fy < fx - drop_tol) decrease_seen = true;
      }
      // Descent rates peak sharply at kinks; a pattern search on the sphere
      // around the best sampled direction recovers the peak.
      if (n >= 2 && best_r > 0.0) {
        Vector u = *best_u;
        for (double delta = spacing; delta > 1e-10; delta *= 0.5) {
          bool moved = true;
          while (moved) {
            moved = false;
            for (const auto& t : tangents(u)) {
              for (double sgn : {1.0, -1.0}) {
                const Vector cand = (u + sgn * delta * t).normalized();
                const double fy = f(x + r * cand);
                if (std::isnan(fy)) return kInf;
                const double q = (fx - fy) / r;
                if (q > best_r) {
                  best_r = q;
                  u = cand;
                  moved = true;
                }
              }
            }
          }
        }
      }
      best = std::max(best, best_r);
    }
    // Tail maxima shrink with k; the finest one is the limsup estimate.
    finest = best;
  }
  if (!decrease_seen) return 0.0;
  return std::max(0.0, finest);
}

std::vector<ProbePoint> smoothness_probe(const ProblemInstance& p,
                                         const Grid& grid,
                                         const ArgminResult& a) {
  std::vector<std::size_t> boundary;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!a.member[i]) continue;
    for (std::size_t j : grid.neighbours(i)) {
      if (!a.member[j]) {
        boundary.push_back(i);
        break;
      }
    }
  }
  constexpr std::size_t kMaxProbe = 200;
  if (boundary.size() > kMaxProbe) {
    std::vector<std::size_t> thinned;
    for (std::size_t k = 0; k < kMaxProbe; ++k) {
      thinned.push_back(boundary[k * boundary.size() / kMaxProbe]);
    }
    boundary = std::move(thinned);
  }

  std::vector<Vector> stencil;
  const int n = grid.dim();
  for (int k = 0; k < n; ++k) {
    Vector e = Vector::Zero(n);
    e[k] = 1.0;
    stencil.push_back(e);
  }
  if (n > 1) {
    for (const auto& u : hadamard_stencil(n)) stencil.push_back(u);
  }

  const double t1 = std::ldexp(1.0, -18);
  const double t2 = std::ldexp(1.0, -14);
  std::vector<ProbePoint> out(boundary.size());
  parallel_for(boundary.size(), [&](std::size_t k) {
    ProbePoint pp;
    pp.x = grid.point(boundary[k]);
    const double fx = p.objective.evaluate(pp.x);
    bool linear = true;
    for (const auto& v : stencil) {
      double d[2];
      for (int sgn = 0; sgn < 2; ++sgn) {
        const Vector w = sgn == 0 ? Vector(v) : Vector(-v);
        const double j1 = p.objective.evaluate(pp.x + t1 * w) - fx;
        const double j2 = p.objective.evaluate(pp.x + t2 * w) - fx;
        if (std::abs(j2) > 1e-8 && std::abs(j1) > 0.5 * std::abs(j2)) {
          pp.discontinuous = true;
        }
        d[sgn] = j1 / t1;
      }
      const double asym = std::abs(d[0] + d[1]);
      pp.max_asymmetry = std::max(pp.max_asymmetry, asym);
      if (asym > 1e-4 * (1.0 + std::abs(d[0]) + std::abs(d[1]))) linear = false;
    }
    pp.looks_differentiable = linear && !pp.discontinuous;
    out[k] = std::move(pp);
  });
  return out;
}

std::pair<double, std::string> estimate_lipschitz(
    const Grid& grid, const std::vector<double>& f) {
  const std::size_t n = grid.size();
  std::vector<Vector> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = grid.point(i);
  std::vector<double> best(n, 0.0);
  if (n <= 5000) {
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = (pts[i] - pts[j]).norm();
        if (d > 0.0) best[i] = std::max(best[i], std::abs(f[i] - f[j]) / d);
      }
    });
    return {*std::max_element(best.begin(), best.end()), "grid-pairwise"};
  }
  // Large grids: quotients over the 3^n - 1 neighbour offsets.
  const int dim = grid.dim();
  const int res = grid.resolution();
  parallel_for(n, [&](std::size_t i) {
    const auto idx = grid.multi_index(i);
    std::vector<int> off(dim, -1);
    for (;;) {
      bool zero = true;
      bool inside = true;
      std::vector<int> nb(idx);
      for (int a = 0; a < dim; ++a) {
        nb[a] += off[a];
        if (off[a] != 0) zero = false;
        if (nb[a] < 0 || nb[a] >= res) inside = false;
      }
      if (!zero && inside) {
        const std::size_t j = grid.flat_index(nb);
        const double d = (pts[i] - pts[j]).norm();
        if (d > 0.0) best[i] = std::max(best[i], std::abs(f[i] - f[j]) / d);
      }
      int a = 0;
      while (a < dim && off[a] == 1) off[a++] = -1;
      if (a == dim) break;
      ++off[a];
    }
  });
  return {*std::max_element(best.begin(), best.end()), "grid-neighbour"};
}

namespace detail {

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::string format_point(const Vector& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += format_g6(x[i]);
  }
  return s + ")";
}

void BackendSet::add(const std::string& s) {
  if (std::find(labels.begin(), labels.end(), s) == labels.end()) {
    labels.push_back(s);
  }
}

std::string BackendSet::joined() const {
  std::string out;
  for (const auto& s : labels) out += (out.empty() ? "" : "+") + s;
  return out.empty() ? "none" : out;
}

CertificateReport make_report(const ProblemInstance& p, const Grid& grid,
                              std::string kind, std::string condition) {
  CertificateReport r;
  r.kind = std::move(kind);
  r.condition = std::move(condition);
  r.seed = p.seed;
  r.dim = grid.dim();
  r.resolution = grid.resolution();
  r.grid_points = grid.size();
  r.box_lo = to_std(grid.lo());
  r.box_hi = to_std(grid.hi());
  return r;
}

void record_argmin(CertificateReport& r, const Grid& grid,
                   const ArgminResult& a) {
  r.inf_f_hat = a.inf_f_hat;
  r.argmin_count = a.count;
  for (std::size_t i = 0; i < grid.size() && r.argmin_points.size() < kMaxListed;
       ++i) {
    if (a.member[i]) r.argmin_points.push_back(to_std(grid.point(i)));
  }
  r.diag("argmin_tol", a.tol);
}

void record_violations(CertificateReport& r, const WsharpCheck& wc) {
  r.violation_count = wc.violation_count;
  r.violations = wc.violations;
}

VanishingProbe probe_vanishing(
    const Grid& grid, const std::vector<char>& excluded,
    const std::function<bool(const Vector&)>& inside,
    const std::function<double(const Vector&)>& condition,
    std::size_t max_segments) {
  std::vector<std::pair<std::size_t, std::size_t>> segs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!excluded[i]) continue;
    for (std::size_t j : grid.neighbours(i)) {
      if (!excluded[j]) segs.emplace_back(i, j);
    }
  }
  if (segs.size() > max_segments) {
    std::vector<std::pair<std::size_t, std::size_t>> thinned;
    for (std::size_t k = 0; k < max_segments; ++k) {
      thinned.push_back(segs[k * segs.size() / max_segments]);
    }
    segs = std::move(thinned);
  }

  constexpr double kFractions[] = {1.0, 0.25, 0.0625, 0.015625};
  std::vector<std::vector<double>> vals(segs.size());
  parallel_for(segs.size(), [&](std::size_t k) {
    const Vector b = grid.point(segs[k].first);
    const Vector d = grid.point(segs[k].second) - b;
    std::vector<double> c;
    for (double s : kFractions) {
      const Vector x = b + s * d;
      if (inside(x)) return;
      double v;
      try {
        v = condition(x);
      } catch (const Error&) {
        return;
      }
      if (!std::isfinite(v)) return;
      c.push_back(v);
    }
    vals[k] = std::move(c);
  });

  VanishingProbe out;
  for (const auto& c : vals) {
    if (c.empty()) continue;
    ++out.segments;
    out.smallest = std::min(out.smallest, *std::min_element(c.begin(), c.end()));
    bool halving = c[0] > 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (!(c[k] <= 0.5 * c[k - 1])) halving = false;
    }
    if (halving || c.back() <= 1e-12) out.vanishing = true;
  }
  return out;
}

void conclude(CertificateReport& r, const ProblemInstance& p,
              const Grid& grid, const ArgminResult& a, double tau,
              bool vanishing, const std::vector<Vector>& missing,
              bool constrained, WsharpCheck* out) {
  for (std::size_t k = 0; k < missing.size() && k < 10; ++k) {
    r.notes.push_back("condition unavailable at " + format_point(missing[k]));
  }
  if (!missing.empty()) r.diag("unavailable_points", static_cast<double>(missing.size()));

  const bool holds = tau > 0.0 && !vanishing && std::isfinite(tau);
  const bool vacuous = tau == kInf && missing.empty();
  const double sigma = vacuous ? kInf : (tau > 0.0 && std::isfinite(tau) ? tau : 0.0);
  WsharpCheck wc = verify_wsharp_inequality(p, grid, a, sigma);
  r.sigma_hat = wc.sigma_hat;
  r.diag("sublevel_violations", static_cast<double>(wc.sublevel_violations));
  if (sigma > 0.0) {
    r.sigma_checked = sigma;
    record_violations(r, wc);
  }

  if (vacuous) {
    r.verdict = Verdict::Certified;
    r.notes.push_back("vacuous: every considered grid point is a minimizer");
  } else if (holds) {
    if (wc.violation_count == 0) {
      r.verdict = missing.empty() ? Verdict::Certified : Verdict::Inconclusive;
    } else {
      r.verdict = Verdict::Refuted;
      r.notes.push_back("weak sharpness inequality fails at sigma = " +
                        format_g6(sigma));
    }
  } else {
    if (vanishing) {
      r.notes.push_back("condition value shrinks to 0 approaching the excluded set");
    }
    // Is weak sharpness itself alive on the grid?
    const auto& dist = wc.dist;
    std::vector<Vector> targets;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (a.member[i]) targets.push_back(grid.point(i));
    }
    auto sigma_at = [&](const Vector& x) {
      double d = kInf;
      for (const auto& t : targets) d = std::min(d, (x - t).norm());
      return (p.objective.evaluate(x) - a.inf_f_hat) / d;
    };
    auto in_argmin = [&](const Vector& x) {
      if (constrained && !p.feasible(x)) return true;
      return p.objective.evaluate(x) <=
             a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
    };
    const auto sp = probe_vanishing(grid, a.member, in_argmin, sigma_at);
    (void)dist;
    if (wc.violation_count > 0 || wc.sigma_hat <= 1e-12 || sp.vanishing) {
      r.verdict = Verdict::Refuted;
      r.notes.push_back("no positive weak sharpness modulus survives on the grid");
    } else {
      r.verdict = Verdict::Inconclusive;
      r.notes.push_back(
          "sufficient condition violated, property holds on grid (sigma_hat = " +
          format_g6(wc.sigma_hat) + ")");
    }
  }
  if (out) *out = std::move(wc);
}

PenaltyWeights resolve_penalty(const ProblemInstance& p, const Grid& grid,
                               const std::vector<double>& values) {
  PenaltyWeights w;
  if (p.lipschitz) {
    w.lipschitz = *p.lipschitz;
    w.source = "user";
  } else if (p.tol.estimate_lipschitz) {
    std::tie(w.lipschitz, w.source) = estimate_lipschitz(grid, values);
  } else {
    throw Error(ErrorCode::Precondition,
                "no Lipschitz rank supplied and estimation is disabled");
  }
  w.lambda = p.lambda.value_or(w.lipschitz > 0.0 ? 2.0 * w.lipschitz : 1.0);
  if (!(w.lambda > w.lipschitz)) {
    throw Error(ErrorCode::Precondition,
                "lambda = " + format_g6(w.lambda) +
                    " must exceed the Lipschitz rank " + format_g6(w.lipschitz) +
                    " (" + w.source + ")");
  }
  return w;
}

void append_trace(GridTrace* trace, const Grid& grid, const ArgminResult& a,
                  const std::vector<double>& dist,
                  const std::vector<double>& condition) {
  if (!trace) return;
  trace->rows.clear();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto row = to_std(grid.point(i));
    row.push_back(a.values[i]);
    row.push_back(dist[i]);
    row.push_back(condition[i]);
    trace->rows.push_back(std::move(row));
  }
}

}  // namespace detail

using namespace detail;

CertificateReport wsharp_check(const ProblemInstance& p, double sigma,
                               GridTrace* trace) {
  p.validate();
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be finite and >= 0");
  }
  const Grid grid = p.grid();
  const bool constrained = p.constrained();
  const ArgminResult a = detect_argmin(p, grid, constrained);
  auto r = make_report(p, grid, "wsharp-check", "direct weak sharpness inequality");
  r.mode = constrained ? "constrained" : "unconstrained";
  r.backend = "grid";
  record_argmin(r, grid, a);
  const WsharpCheck wc = verify_wsharp_inequality(p, grid, a, sigma);
  r.sigma_checked = sigma;
  r.sigma_hat = wc.sigma_hat;
  record_violations(r, wc);
  r.diag("sublevel_violations", static_cast<double>(wc.sublevel_violations));
  r.verdict = wc.violation_count == 0 ? Verdict::Certified : Verdict::Refuted;
  if (trace) {
    trace->condition_name = "sigma_quotient";
    std::vector<double> cond(grid.size(), std::nan(""));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (a.feasible[i] && !a.member[i]) {
        cond[i] = (a.values[i] - a.inf_f_hat) / wc.dist[i];
      }
    }
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

namespace {

struct QdPoint {
  double inner = kInf;
  double outer = kInf;
  double slope = 0.0;
  bool ok = false;
  bool approx = false;
  DemyanovBackend backend = DemyanovBackend::Exact1d;
};

QdPoint qd_condition(const Expr& f, const Vector& x,
                     const DemyanovOptions& dopt) {
  QdPoint q;
  const QuasiDiff d = quasidiff(f, x);
  const DemyanovResult dem = demcoqd(d, dopt);
  q.inner = min_norm_point(dem.set).distance;
  q.outer = min_norm_point(qd_outer_bound(d)).distance;
  q.approx = d.approx();
  q.backend = dem.backend;
  q.ok = true;
  return q;
}

void attach_probe(CertificateReport& r, const std::vector<ProbePoint>& probe) {
  std::size_t diff = 0;
  std::size_t jump = 0;
  for (const auto& pp : probe) {
    if (pp.looks_differentiable) {
      if (diff < 10) {
        r.notes.push_back("boundary minimizer " + format_point(pp.x) +
                          " looks differentiable");
      }
      ++diff;
    }
    if (pp.discontinuous) ++jump;
  }
  r.diag("probe_points", static_cast<double>(probe.size()));
  r.diag("probe_differentiable", static_cast<double>(diff));
  r.diag("probe_discontinuous", static_cast<double>(jump));
}

std::vector<std::size_t> non_argmin(const Grid& grid, const ArgminResult& a) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (a.feasible[i] && !a.member[i]) idx.push_back(i);
  }
  return idx;
}

}  // namespace

CertificateReport certify_qd(const ProblemInstance& p, GridTrace* trace) {
  p.validate();
  const Grid grid = p.grid();
  const ArgminResult a = detect_argmin(p, grid, false);
  auto r = make_report(p, grid, "certify-qd",
                       "dist(0, Demcoqd f) bounded away from 0 off the argmin");
  record_argmin(r, grid, a);
  if (p.constrained()) r.notes.push_back("constraints ignored by this command");

  DemyanovOptions dopt;
  dopt.seed = p.seed;
  const auto idx = non_argmin(grid, a);
  std::vector<QdPoint> pts(idx.size());
  const Expr& f = p.objective;
  const ScalarFn fn = [&f](const Vector& x) { return f.evaluate(x); };
  parallel_for(idx.size(), [&](std::size_t k) {
    const Vector x = grid.point(idx[k]);
    try {
      pts[k] = qd_condition(f, x, dopt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotQuasidifferentiable) throw;
      return;
    }
    pts[k].slope = strong_slope_estimate(fn, x, {}, p.seed);
  });

  double tau_sharp = kInf;
  double tau_sound = kInf;
  std::size_t slope_failures = 0;
  double slope_margin = kInf;
  BackendSet backends;
  std::vector<Vector> missing;
  std::vector<double> cond(grid.size(), std::nan(""));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& q = pts[k];
    if (!q.ok) {
      missing.push_back(grid.point(idx[k]));
      continue;
    }
    tau_sharp = std::min(tau_sharp, q.inner);
    tau_sound = std::min(tau_sound, q.outer);
    cond[idx[k]] = q.outer;
    backends.add(to_string(q.backend));
    r.approx_geometry = r.approx_geometry || q.approx;
    const double margin = q.slope - q.inner;
    slope_margin = std::min(slope_margin, margin);
    if (margin < -1e-3) ++slope_failures;
  }
  r.tau_sharp = tau_sharp;
  r.tau_sound = tau_sound;
  r.backend = backends.joined();
  r.diag("slope_check_failures", static_cast<double>(slope_failures));
  if (std::isfinite(slope_margin)) r.diag("slope_check_min_margin", slope_margin);
  if (slope_failures > 0) {
    r.notes.push_back("strong slope fell below the inner Demcoqd distance at " +
                      std::to_string(slope_failures) + " points");
  }
  if (r.approx_geometry) {
    r.notes.push_back("Euclidean balls replaced by inscribed polytopes");
  }

  auto in_argmin = [&](const Vector& x) {
    return f.evaluate(x) <= a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
  };
  auto outer_at = [&](const Vector& x) { return qd_condition(f, x, dopt).outer; };
  const auto vp = probe_vanishing(grid, a.member, in_argmin, outer_at);
  r.diag("probe_segments", static_cast<double>(vp.segments));
  if (std::isfinite(vp.smallest)) r.diag("probe_min_condition", vp.smallest);

  WsharpCheck wc;
  conclude(r, p, grid, a, tau_sound, vp.vanishing, missing, false, &wc);
  attach_probe(r, smoothness_probe(p, grid, a));
  if (trace) {
    trace->condition_name = "demcoqd_outer_distance";
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

CertificateReport certify_slope(const ProblemInstance& p, GridTrace* trace) {
  p.validate();
  const Grid grid = p.grid();
  const ArgminResult a = detect_argmin(p, grid, false);
  auto r = make_report(p, grid, "slope",
                       "strong slope bounded away from 0 off the argmin");
  r.backend = "slope-schedule";
  record_argmin(r, grid, a);
  const Expr& f = p.objective;
  const ScalarFn fn = [&f](const Vector& x) { return f.evaluate(x); };

  for (const auto& x : p.slope_at) {
    r.samples.push_back({to_std(x), strong_slope_estimate(fn, x, {}, p.seed)});
  }

  const auto idx = non_argmin(grid, a);
  std::vector<double> slopes(idx.size());
  parallel_for(idx.size(), [&](std::size_t k) {
    slopes[k] = strong_slope_estimate(fn, grid.point(idx[k]), {}, p.seed);
  });
  double tau = kInf;
  std::vector<double> cond(grid.size(), std::nan(""));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    tau = std::min(tau, slopes[k]);
    cond[idx[k]] = slopes[k];
  }
  r.tau_sharp = tau;
  r.tau_sound = tau;

  auto in_argmin = [&](const Vector& x) {
    return f.evaluate(x) <= a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
  };
  auto slope_at = [&](const Vector& x) {
    return strong_slope_estimate(fn, x, {}, p.seed);
  };
  const auto vp = probe_vanishing(grid, a.member, in_argmin, slope_at);
  r.diag("probe_segments", static_cast<double>(vp.segments));
  if (std::isfinite(vp.smallest)) r.diag("probe_min_condition", vp.smallest);

  WsharpCheck wc;
  conclude(r, p, grid, a, tau, vp.vanishing, {}, false, &wc);
  if (trace) {
    trace->condition_name = "strong_slope";
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

namespace {

// User entry for x: a pointwise match first, then a global entry.
const ExhausterOverride* find_override(const ProblemInstance& p,
                                       const Vector& x) {
  const ExhausterOverride* global = nullptr;
  for (const auto& o : p.exhauster) {
    if (!o.at) {
      if (!global) global = &o;
      continue;
    }
    if ((*o.at - x).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      return &o;
    }
  }
  return global;
}

}  // namespace

namespace detail {

// Exhauster at x: user-supplied when available, symbolic otherwise. Sets
// `user` accordingly.
LowerExhauster exhauster_at(const ProblemInstance& p, const Vector& x,
                            bool& user) {
  if (const auto* o = find_override(p, x)) {
    user = true;
    return LowerExhauster(o->members);
  }
  user = false;
  return symbolic_exhauster(p.objective, x);
}

}  // namespace detail

CertificateReport certify_exhauster(const ProblemInstance& p,
                                    GridTrace* trace) {
  p.validate();
  const Grid grid = p.grid();
  const ArgminResult a = detect_argmin(p, grid, false);
  auto r = make_report(p, grid, "certify-exhauster",
                       "lower exhauster norm bounded away from 0 off the argmin");
  record_argmin(r, grid, a);
  if (p.constrained()) r.notes.push_back("constraints ignored by this command");

  const auto idx = non_argmin(grid, a);
  std::vector<double> norms(idx.size(), std::nan(""));
  std::vector<char> user(idx.size(), 0);
  std::vector<char> approx(idx.size(), 0);
  parallel_for(idx.size(), [&](std::size_t k) {
    bool u = false;
    try {
      const auto e = exhauster_at(p, grid.point(idx[k]), u);
      norms[k] = exhauster_norm(e);
      approx[k] = e.approx();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NotQuasidifferentiable) throw;
    }
    user[k] = u;
  });

  double tau = kInf;
  BackendSet backends;
  std::vector<Vector> missing;
  std::vector<double> cond(grid.size(), std::nan(""));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (std::isnan(norms[k])) {
      missing.push_back(grid.point(idx[k]));
      continue;
    }
    tau = std::min(tau, norms[k]);
    cond[idx[k]] = norms[k];
    backends.add(user[k] ? "user" : "symbolic");
    r.approx_geometry = r.approx_geometry || approx[k];
  }
  r.tau_sharp = tau;
  r.tau_sound = tau;
  r.backend = backends.joined();

  auto in_argmin = [&](const Vector& x) {
    return p.objective.evaluate(x) <= a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
  };
  auto norm_at = [&](const Vector& x) {
    bool u = false;
    return exhauster_norm(exhauster_at(p, x, u));
  };
  const auto vp = probe_vanishing(grid, a.member, in_argmin, norm_at);
  r.diag("probe_segments", static_cast<double>(vp.segments));
  if (std::isfinite(vp.smallest)) r.diag("probe_min_condition", vp.smallest);

  WsharpCheck wc;
  conclude(r, p, grid, a, tau, vp.vanishing, missing, false, &wc);
  if (trace) {
    trace->condition_name = "exhauster_norm";
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

CertificateReport check_error_bound(const ProblemInstance& p,
                                    GridTrace* trace) {
  p.validate();
  if (!p.has_functional_constraints()) {
    throw Error(ErrorCode::Precondition,
                "errorbound needs a constraint function g or h");
  }
  const Grid grid = p.grid();
  const double alpha = p.errorbound.alpha;
  const double beta = p.errorbound.beta;
  const double feas = p.tol.feasibility;
  const ScalarFn residual = [&](const Vector& x) {
    double v = 0.0;
    if (p.g) v += std::max(0.0, p.g->evaluate(x) - alpha);
    if (p.h) v += std::abs(p.h->evaluate(x) - beta);
    return v;
  };

  ArgminResult omega;
  omega.values.resize(grid.size());
  omega.feasible.assign(grid.size(), 1);
  omega.member.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector x = grid.point(i);
    omega.values[i] = residual(x);
    bool in = true;
    if (p.g && !(p.g->evaluate(x) - alpha <= feas)) in = false;
    if (p.h && !(std::abs(p.h->evaluate(x) - beta) <= feas)) in = false;
    omega.member[i] = in;
    omega.count += in;
  }
  if (omega.count == 0) {
    throw Error(ErrorCode::Precondition, "error bound: the set is empty on the grid");
  }
  omega.tol = feas;

  auto r = make_report(p, grid, "errorbound",
                       "dist(x, Omega) <= ([g - alpha]_+ + |h - beta|) / tau");
  r.mode = "error-bound";
  r.backend = "grid";
  record_argmin(r, grid, omega);
  r.notes.push_back("argmin fields describe the set Omega_{alpha,beta}");
  r.diag("alpha", alpha);
  r.diag("beta", beta);

  const auto dist = grid_distance_to_set(grid, omega.member);
  const auto idx = non_argmin(grid, omega);
  std::vector<double> slopes(idx.size());
  parallel_for(idx.size(), [&](std::size_t k) {
    slopes[k] = strong_slope_estimate(residual, grid.point(idx[k]), {}, p.seed);
  });
  double tau_slope = kInf;
  double tau_ratio = kInf;
  std::vector<double> cond(grid.size(), std::nan(""));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    tau_slope = std::min(tau_slope, slopes[k]);
    tau_ratio = std::min(tau_ratio, omega.values[idx[k]] / dist[idx[k]]);
    cond[idx[k]] = omega.values[idx[k]] / dist[idx[k]];
  }
  r.tau_sharp = tau_slope;
  r.tau_sound = tau_slope;
  r.sigma_hat = tau_ratio;
  r.diag("tau_slope", tau_slope);
  r.diag("tau_ratio", tau_ratio);

  const double tau = p.errorbound.tau.value_or(tau_slope);
  r.sigma_checked = tau;
  if (idx.empty()) {
    r.verdict = Verdict::Certified;
    r.notes.push_back("vacuous: every grid point lies in Omega");
  } else if (!(tau > 0.0) || !std::isfinite(tau)) {
    r.verdict = Verdict::Inconclusive;
    r.notes.push_back("no positive tau available for the bound");
  } else {
    // Grid distances to the sampled set overshoot the true distance by at
    // most one cell diagonal.
    double cell = 0.0;
    for (int k = 0; k < grid.dim(); ++k) cell += grid.step(k) * grid.step(k);
    cell = std::sqrt(cell);
    r.diag("dist_slack", cell);
    double worst = 0.0;
    for (std::size_t i : idx) {
      const double lhs = dist[i];
      const double rhs = omega.values[i] / tau;
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs + cell + 1e-9 * (1.0 + lhs)) {
        ++r.violation_count;
        if (r.violations.size() < kMaxListed) {
          r.violations.push_back({to_std(grid.point(i)), lhs, rhs});
        }
      }
    }
    r.diag("worst_ratio", worst);
    r.verdict = r.violation_count == 0 ? Verdict::Certified : Verdict::Refuted;
  }
  if (trace) {
    trace->condition_name = "residual_over_dist";
    append_trace(trace, grid, omega, dist, cond);
  }
  return r;
}

}  // namespace wsharp
