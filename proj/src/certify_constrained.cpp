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

#include <algorithm>
#include <cmath>

#include "certify_internal.hpp"
#include "wsharp/certify.hpp"
#include "wsharp/nnls.hpp"

namespace wsharp {

using namespace detail;

int penalty_case(int sg, int sh) {
  if (sg < 0 && sh < 0) return 1;
  if (sg < 0 && sh > 0) return 2;
  if (sg == 0 && sh < 0) return 3;
  if (sg == 0 && sh > 0) return 4;
  if (sg > 0 && sh < 0) return 5;
  if (sg > 0 && sh > 0) return 6;
  if (sg > 0 && sh == 0) return 7;
  return 0;
}

namespace {

int sign_with_tol(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

const char* case_label(int c, int sg) {
  switch (c) {
    case 1: return "g<0, h<0";
    case 2: return "g<0, h>0";
    case 3: return "g=0, h<0";
    case 4: return "g=0, h>0";
    case 5: return "g>0, h<0";
    case 6: return "g>0, h>0";
    case 7: return "g>0, h=0";
    default: return sg < 0 ? "feasible, g<0, h=0" : "feasible, g=0, h=0";
  }
}

// Conjunction of the rows of a polyhedron as one max-of-affine constraint.
Expr polyhedron_as_g(const Polyhedron& poly) {
  std::vector<Expr> rows;
  for (std::size_t i = 0; i < poly.normals.size(); ++i) {
    rows.push_back(Expr::affine(poly.normals[i], -poly.offsets[i]));
  }
  return rows.size() == 1 ? rows.front() : Expr::max(std::move(rows));
}

}  // namespace

PenaltyDemcoqd penalty_demcoqd(const std::optional<Expr>& g,
                               const std::optional<Expr>& h, const Vector& x,
                               double tie_tol, const DemyanovOptions& opt) {
  const int n = static_cast<int>(x.size());
  if (g) check_same_dim("penalty_demcoqd", g->dim(), n);
  if (h) check_same_dim("penalty_demcoqd", h->dim(), n);
  const QuasiDiff zero = make_quasidiff(Polytope::origin(n), Polytope::origin(n));
  QdOptions qopt;
  qopt.activity_tol = tie_tol;

  // An absent g never binds; an absent h is the zero function.
  const double gv = g ? g->evaluate(x) : -1.0;
  const double hv = h ? h->evaluate(x) : 0.0;
  const int sg = g ? sign_with_tol(gv, tie_tol) : -1;
  const int sh = sign_with_tol(hv, tie_tol);

  const QuasiDiff pg = g ? qd_pospart(quasidiff(*g, x, qopt), gv, tie_tol) : zero;
  const QuasiDiff ph = h ? qd_abs(quasidiff(*h, x, qopt), hv, tie_tol) : zero;
  const DemyanovResult dg = demcoqd(pg, opt);
  const DemyanovResult dh = demcoqd(ph, opt);

  PenaltyDemcoqd out{
      canonicalize(minkowski_sum(dg.set, dh.set)),
      canonicalize(minkowski_sum(qd_outer_bound(pg), qd_outer_bound(ph))), 0, {},
      false, dg.backend};
  out.case_id = penalty_case(sg, sh);
  out.label = case_label(out.case_id, sg);
  out.approx = pg.approx() || ph.approx();
  return out;
}

CappedConeResult capped_cone_distance(const Polytope& e,
                                      const std::vector<Vector>& generators,
                                      double lambda, double tol,
                                      int max_iterations) {
  const int n = e.dim();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument,
                "capped_cone_distance: lambda must be finite and >= 0");
  }
  Eigen::MatrixXd cone(n, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    check_same_dim("capped_cone_distance", n, generators[j].size());
    cone.col(static_cast<Eigen::Index>(j)) = generators[j];
  }

  // argmin over E + lambda (K ∩ B) of <z, s>.
  auto lmo = [&](const Vector& z) {
    Vector s = e.vertex(argmax_vertex(e, -z, 0.0).index);
    if (cone.cols() > 0 && lambda > 0.0) {
      const Vector pk = project_onto_cone(cone, -z);
      const double nk = pk.norm();
      if (nk > 1e-15) s += lambda * pk / nk;
    }
    return s;
  };

  std::size_t start = 0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e.vertex(i).squaredNorm() < e.vertex(start).squaredNorm()) start = i;
  }
  std::vector<Vector> atoms{e.vertex(start)};
  CappedConeResult r;
  r.point = atoms.front();
  double lower = 0.0;
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    const MinNormPoint mnp = min_norm_point(Polytope(atoms), 1e-14);
    const Vector z = mnp.point;
    r.point = z;
    const double zn = z.norm();
    if (zn <= 1e-15) {
      r.converged = true;
      lower = 0.0;
      break;
    }
    const Vector s = lmo(z);
    const double zs = z.dot(s);
    lower = std::max(lower, zs / zn);
    const double gap = z.squaredNorm() - zs;
    if (gap <= tol * (1.0 + z.squaredNorm())) {
      r.converged = true;
      break;
    }
    bool duplicate = false;
    for (const auto& a : atoms) {
      if ((a - s).norm() <= 1e-14 * (1.0 + s.norm())) duplicate = true;
    }
    if (duplicate) {
      r.converged = true;
      break;
    }
    atoms.push_back(s);
  }
  r.iterations = std::min(r.iterations, max_iterations);
  r.upper = r.point.norm();
  r.distance = std::min(std::max(0.0, lower), r.upper);
  return r;
}

namespace {

struct ConstrainedPoint {
  bool ok = false;
  bool approx = false;
  int case_id = 0;
  double pen_inner = kInf;
  double pen_outer = kInf;
  Polytope dem_f = Polytope::origin(1);
  Polytope outer_f = Polytope::origin(1);
  Polytope pen_set = Polytope::origin(1);
  Polytope pen_outer_set = Polytope::origin(1);
  std::string backend;
};

}  // namespace

CertificateReport certify_constrained(const ProblemInstance& p_in,
                                      GridTrace* trace) {
  p_in.validate();
  if (!p_in.constrained()) {
    throw Error(ErrorCode::Precondition,
                "certify-constrained needs constraints g, h or a polyhedron");
  }
  ProblemInstance p = p_in;
  if (p.polyhedron) {
    Expr rows = polyhedron_as_g(*p.polyhedron);
    p.g = p.g ? Expr::max({*p.g, rows}) : rows;
    p.polyhedron.reset();
  }
  const Grid grid = p.grid();
  const ArgminResult a = detect_argmin(p, grid, true);
  auto r = make_report(p_in, grid, "certify-constrained",
                       "penalized Demcoqd bounded away from 0 off the "
                       "constrained argmin");
  r.mode = "constrained";
  record_argmin(r, grid, a);
  const PenaltyWeights w = resolve_penalty(p, grid, a.values);
  r.lipschitz = w.lipschitz;
  r.lipschitz_source = w.source;
  r.lambda = w.lambda;

  DemyanovOptions dopt;
  dopt.seed = p.seed;
  const double tie = p.tol.tie;
  auto evaluate_point = [&](const Vector& x) {
    ConstrainedPoint c;
    const QuasiDiff qf = quasidiff(p.objective, x);
    const DemyanovResult df = demcoqd(qf, dopt);
    const PenaltyDemcoqd pen = penalty_demcoqd(p.g, p.h, x, tie, dopt);
    c.dem_f = df.set;
    c.outer_f = qd_outer_bound(qf);
    c.pen_set = pen.set;
    c.pen_outer_set = pen.outer;
    c.pen_inner = min_norm_point(pen.set).distance;
    c.pen_outer = min_norm_point(pen.outer).distance;
    c.case_id = pen.case_id;
    c.approx = qf.approx() || pen.approx;
    c.backend = to_string(df.backend);
    c.ok = true;
    return c;
  };

  std::vector<ConstrainedPoint> pts(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      pts[i] = evaluate_point(grid.point(i));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotQuasidifferentiable) throw;
    }
  });

  std::vector<Vector> missing;
  double tau_sharp = kInf;
  double tau_sound = kInf;
  std::vector<std::size_t> case_counts(8, 0);
  BackendSet backends;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& c = pts[i];
    if (!c.ok) {
      if (!a.member[i]) missing.push_back(grid.point(i));
      continue;
    }
    ++case_counts[c.case_id];
    backends.add(c.backend);
    r.approx_geometry = r.approx_geometry || c.approx;
    if (!a.feasible[i]) {
      tau_sharp = std::min(tau_sharp, c.pen_inner);
      tau_sound = std::min(tau_sound, c.pen_outer);
    }
  }
  r.tau_sharp = tau_sharp;
  r.tau_sound = tau_sound;
  r.backend = backends.joined();
  for (int k = 1; k <= 7; ++k) {
    r.diag("case_" + std::to_string(k) + "_points", static_cast<double>(case_counts[k]));
  }
  r.diag("feasible_points", static_cast<double>(case_counts[0]));

  auto penalty_outer_at = [&](const Vector& x) {
    return min_norm_point(penalty_demcoqd(p.g, p.h, x, tie, dopt).outer).distance;
  };
  auto feasible_at = [&](const Vector& x) { return p.feasible(x); };
  const auto tp = probe_vanishing(grid, a.feasible, feasible_at, penalty_outer_at);
  r.diag("penalty_probe_segments", static_cast<double>(tp.segments));
  const bool penalty_ok = tau_sound == kInf ||
                          (tau_sound > 0.0 && !tp.vanishing);
  if (tau_sound == kInf) {
    r.notes.push_back("no infeasible grid point; the penalty term is inactive");
  }

  std::vector<double> cond(grid.size(), std::nan(""));
  double zeta_sharp = kInf;
  double zeta_sound = kInf;
  double coef = 0.0;
  bool zeta_vanishing = false;
  if (penalty_ok) {
    coef = tau_sound == kInf ? 0.0 : w.lambda / tau_sound;
    std::vector<double> inner(grid.size(), kInf);
    parallel_for(grid.size(), [&](std::size_t i) {
      const auto& c = pts[i];
      if (!c.ok || a.member[i]) return;
      inner[i] = min_norm_point(minkowski_sum(c.dem_f, scale(coef, c.pen_set))).distance;
      cond[i] = min_norm_point(
                    minkowski_sum(c.outer_f, scale(coef, c.pen_outer_set)))
                    .distance;
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!pts[i].ok || a.member[i]) continue;
      zeta_sharp = std::min(zeta_sharp, inner[i]);
      zeta_sound = std::min(zeta_sound, cond[i]);
    }
    auto zeta_at = [&](const Vector& x) {
      const auto c = evaluate_point(x);
      return min_norm_point(minkowski_sum(c.outer_f, scale(coef, c.pen_outer_set)))
          .distance;
    };
    auto in_argmin = [&](const Vector& x) {
      return p.feasible(x) && p.objective.evaluate(x) <=
                                  a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
    };
    const auto zp = probe_vanishing(grid, a.member, in_argmin, zeta_at);
    zeta_vanishing = zp.vanishing;
    r.diag("probe_segments", static_cast<double>(zp.segments));
    r.zeta_sharp = zeta_sharp;
    r.zeta_sound = zeta_sound;
    r.diag("penalty_coefficient", coef);

    // Grid argmin of the penalized objective over the box should match the
    // constrained grid argmin.
    std::vector<double> pen_vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vector x = grid.point(i);
      double v = 0.0;
      if (p.g) v += std::max(0.0, p.g->evaluate(x));
      if (p.h) v += std::abs(p.h->evaluate(x));
      pen_vals[i] = a.values[i] + coef * v;
    }
    const double pen_min = *std::min_element(pen_vals.begin(), pen_vals.end());
    bool same = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const bool in_pen = pen_vals[i] <= pen_min + a.tol;
      if (in_pen != static_cast<bool>(a.member[i])) same = false;
    }
    r.diag("exact_penalty_consistent", same ? 1.0 : 0.0);
  } else {
    r.notes.push_back("penalty nondegeneracy fails: no positive tau on the grid");
  }
  if (r.approx_geometry) {
    r.notes.push_back("Euclidean balls replaced by inscribed polytopes");
  }

  WsharpCheck wc;
  conclude(r, p, grid, a, penalty_ok ? zeta_sound : 0.0, zeta_vanishing,
           missing, true, &wc);
  if (trace) {
    trace->condition_name = "zeta_outer_distance";
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

CertificateReport certify_constrained_exhauster(const ProblemInstance& p_in,
                                                GridTrace* trace) {
  p_in.validate();
  if (!p_in.polyhedron || p_in.polyhedron->normals.empty()) {
    throw Error(ErrorCode::Precondition,
                "certify-constrained-exhauster needs a polyhedral feasible set");
  }
  ProblemInstance p = p_in;
  if (p.g || p.h) {
    p.g.reset();
    p.h.reset();
  }
  const Grid grid = p.grid();
  const ArgminResult a = detect_argmin(p, grid, true);
  auto r = make_report(p_in, grid, "certify-constrained-exhauster",
                       "sup over exhauster members of dist(0, E + lambda "
                       "(normal cone ∩ ball)) bounded away from 0");
  r.mode = "constrained";
  r.backend = "frank-wolfe";
  record_argmin(r, grid, a);
  if (p_in.g || p_in.h) r.notes.push_back("g and h ignored; only polyhedron rows used");
  const PenaltyWeights w = resolve_penalty(p, grid, a.values);
  r.lipschitz = w.lipschitz;
  r.lipschitz_source = w.source;
  r.lambda = w.lambda;

  const Polyhedron& poly = *p.polyhedron;
  const double tie = p.tol.tie;
  struct PointResult {
    double value = std::nan("");
    bool unconverged = false;
    bool approx = false;
  };
  auto evaluate_point = [&](const Vector& x) {
    PointResult pr;
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < poly.normals.size(); ++i) {
      const double d = poly.offsets[i];
      if (std::abs(poly.normals[i].dot(x) - d) <= tie * (1.0 + std::abs(d))) {
        gens.push_back(poly.normals[i]);
      }
    }
    bool user = false;
    const auto ex = exhauster_at(p, x, user);
    double worst = 0.0;
    for (const auto& m : ex.members()) {
      const auto cc = capped_cone_distance(m, gens, w.lambda);
      if (!cc.converged) pr.unconverged = true;
      worst = std::max(worst, cc.distance);
    }
    pr.value = worst;
    pr.approx = ex.approx();
    return pr;
  };

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (a.feasible[i] && !a.member[i]) idx.push_back(i);
  }
  std::vector<PointResult> vals(idx.size());
  parallel_for(idx.size(), [&](std::size_t k) {
    try {
      vals[k] = evaluate_point(grid.point(idx[k]));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotQuasidifferentiable &&
          e.code() != ErrorCode::Convergence) {
        throw;
      }
    }
  });

  double zeta = kInf;
  std::size_t unconverged = 0;
  std::vector<Vector> missing;
  std::vector<double> cond(grid.size(), std::nan(""));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (std::isnan(vals[k].value)) {
      missing.push_back(grid.point(idx[k]));
      continue;
    }
    zeta = std::min(zeta, vals[k].value);
    cond[idx[k]] = vals[k].value;
    unconverged += vals[k].unconverged;
    r.approx_geometry = r.approx_geometry || vals[k].approx;
  }
  r.zeta_sharp = zeta;
  r.zeta_sound = zeta;
  r.diag("solver_unconverged_points", static_cast<double>(unconverged));

  auto in_argmin = [&](const Vector& x) {
    return !p.feasible(x) || p.objective.evaluate(x) <= a.inf_f_hat + kProbeTol * (1.0 + std::abs(a.inf_f_hat));
  };
  auto zeta_at = [&](const Vector& x) { return evaluate_point(x).value; };
  const auto vp = probe_vanishing(grid, a.member, in_argmin, zeta_at);
  r.diag("probe_segments", static_cast<double>(vp.segments));

  WsharpCheck wc;
  conclude(r, p, grid, a, zeta, vp.vanishing, missing, true, &wc);
  if (trace) {
    trace->condition_name = "capped_cone_distance";
    append_trace(trace, grid, a, wc.dist, cond);
  }
  return r;
}

}  // namespace wsharp
