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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wsharp/problem.hpp"

using namespace wsharp;
using oracle::scalar;
using oracle::vec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

bool relation_in(const Polytope& a, const Polytope& b, double tol, bool allow_subset) {
  const auto r = set_compare(a, b, tol).relation;
  return r == SetRelation::Equal || (allow_subset && r == SetRelation::Subset);
}

const Expr kX = Expr::affine(scalar(1), 0);

Expr piecewise_rational() {
  return Expr::piecewise(0, {0.0},
                         {Expr::constant(1, 0),
                          Expr::rational(1, {{1, {2}}, {1, {1}}, {1, {0}}}, {{1, {1}}, {1, {0}}})});
}

bool has_note(const CertificateReport& r, const std::string& needle) {
  for (const auto& n : r.notes) {
    if (n.find(needle) != std::string::npos) return true;
  }
  return false;
}

struct Pair {
  Polytope a, b;
};

std::vector<Pair> planar_pairs() {
  std::mt19937_64 rng(0x5EED);
  std::vector<Pair> out;
  for (int i = 0; i < 200; ++i) {
    Polytope a = oracle::random_polytope(rng, 2, 12);
    Polytope b = oracle::random_polytope(rng, 2, 12);
    out.push_back({std::move(a), std::move(b)});
  }
  return out;
}

Outcome c1() {
  Outcome o;
  ProblemInstance p(piecewise_rational(), scalar(-5), scalar(5), 2001);
  const auto w = wsharp_check(p, 1.0);
  o.require(w.verdict == Verdict::Certified && w.violation_count == 0, "wsharp-check sigma 1");
  const auto f = [&](const Vector& x) { return p.objective.evaluate(x); };
  for (double x : {0.5, 1.0, 2.0}) {
    const double exact = 1 - 1 / ((x + 1) * (x + 1));
    o.require(std::abs(strong_slope_estimate(f, scalar(x)) - exact) <= 1e-3,
              "slope at " + std::to_string(x));
  }
  const auto q = certify_qd(p);
  o.require(q.tau_sharp && *q.tau_sharp < 0.05, "tau_hat < 0.05");
  o.require(q.verdict != Verdict::Certified, "certify-qd must not certify");
  o.require(has_note(q, "sufficient condition violated, property holds"), "report note");
  return o;
}

Outcome c2(const std::vector<Pair>& pairs) {
  Outcome o;
  std::mt19937_64 rng(7);
  const double tol = 1e-9;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    const Pair& other = pairs[(i + 1) % pairs.size()];
    const Polytope e = oracle::random_polytope(rng, 2, 12);
    const auto ab = demyanov_diff(a, b);
    const std::string at = " (pair " + std::to_string(i) + ")";
    o.require(ab.backend == DemyanovBackend::Exact2d, "backend" + at);
    o.require(relation_in(demyanov_diff(minkowski_sum(a, e), minkowski_sum(b, e)).set, ab.set, tol, false),
              "(1) class invariance" + at);
    o.require(relation_in(demyanov_diff(a, a).set, Polytope::origin(2), tol, false), "(2) A-A" + at);
    const Polytope inner = oracle::random_subpolytope(rng, a, 5);
    o.require(min_norm_point(demyanov_diff(a, inner).set).distance <= tol, "(3) subset" + at);
    const auto lhs = demyanov_diff(minkowski_sum(a, b), minkowski_sum(other.a, other.b)).set;
    const auto rhs = minkowski_sum(demyanov_diff(a, other.a).set, demyanov_diff(b, other.b).set);
    o.require(relation_in(lhs, rhs, tol, true), "(4) sum inclusion" + at);
    o.require(relation_in(demyanov_diff(a, Polytope::origin(2)).set, canonicalize(a), tol, false),
              "(5) A-0" + at);
    o.require(relation_in(ab.set, minkowski_sum(a, reflect(b)), tol, true), "(6) A+(-B)" + at);
  }
  return o;
}

Outcome c3(const std::vector<Pair>& pairs, double* worst) {
  Outcome o;
  DemyanovOptions sampled;
  sampled.force_sampled = true;
  sampled.sample_count = 10000;
  *worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto exact = demyanov_diff(pairs[i].a, pairs[i].b);
    const auto approx = demyanov_diff(pairs[i].a, pairs[i].b, sampled);
    const double h = set_compare(approx.set, exact.set, 1e-9).hausdorff;
    *worst = std::max(*worst, h);
    o.require(h <= 0.05, "Hausdorff at pair " + std::to_string(i));
  }
  return o;
}

Outcome c4() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 50; ++i) {
    double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
    const Polytope a = Polytope::interval(std::min(a0, a1), std::max(a0, a1));
    const Polytope b = Polytope::interval(std::min(b0, b1), std::max(b0, b1));
    const auto [lo, hi] = oracle::clarke_1d(a.vertices(), b.vertices());
    const auto r = canonicalize(demyanov_diff(a, b).set);
    double rlo = r.vertex(0)[0], rhi = rlo;
    for (const auto& v : r.vertices()) {
      rlo = std::min(rlo, v[0]);
      rhi = std::max(rhi, v[0]);
    }
    o.require(rlo == lo && rhi == hi, "interval pair " + std::to_string(i));
  }
  return o;
}

Outcome c5(std::size_t* count) {
  Outcome o;
  const auto corpus = oracle::corpus();
  *count = corpus.size();
  o.require(corpus.size() >= 20, "corpus size");
  for (const auto& entry : corpus) {
    ProblemInstance p(entry.e, entry.lo, entry.hi, entry.e.dim() == 1 ? 201 : 21);
    const Grid g = p.grid();
    const auto a = detect_argmin(p, g, false);
    const auto f = [&](const Vector& x) { return entry.e.evaluate(x); };
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (a.member[i]) continue;
      const Vector x = g.point(i);
      double inner;
      try {
        inner = min_norm_point(demcoqd(entry.e, x).set).distance;
      } catch (const Error&) {
        continue;
      }
      const double slope = strong_slope_estimate(f, x);
      std::string where = entry.name + " at (";
      for (Eigen::Index k = 0; k < x.size(); ++k) where += (k ? "," : "") + format_g6(x[k]);
      o.require(slope >= inner - 1e-3,
                where + "): slope " + format_g6(slope) + " < " + format_g6(inner));
    }
  }
  return o;
}

Outcome c6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = trial < 2 ? 1 : 2;
    std::vector<Expr> pieces;
    std::vector<Vector> grads;
    std::vector<double> offs;
    for (int k = 0; k < 3 + trial % 3; ++k) {
      Vector a(dim);
      for (int i = 0; i < dim; ++i) a[i] = std::round(4 * u(rng)) / 4;
      const double b = std::round(4 * u(rng)) / 4;
      grads.push_back(a);
      offs.push_back(b);
      pieces.push_back(Expr::affine(a, b));
    }
    const Expr f = Expr::max(pieces);
    ProblemInstance p(f, Vector::Constant(dim, -2), Vector::Constant(dim, 2), dim == 1 ? 81 : 21);
    const Grid g = p.grid();

    // Hand computation: active gradients, their hull, the nearest point.
    std::vector<double> vals(g.size());
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) inf = std::min(inf, vals[i] = f.evaluate(g.point(i)));
    const double atol = 1e-6 * (1 + std::abs(inf));
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vector x = g.point(i);
      std::vector<Vector> active;
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < grads.size(); ++k) m = std::max(m, grads[k].dot(x) + offs[k]);
      for (std::size_t k = 0; k < grads.size(); ++k) {
        if (grads[k].dot(x) + offs[k] >= m - kActivityTol * (1 + std::abs(m))) active.push_back(grads[k]);
      }
      if (trial < 4 || i % 7 == 0) {
        const auto d = demcoqd(f, x).set;
        o.require(relation_in(d, Polytope(active), 1e-9, false), "Demcoqd equals active hull");
      }
      if (vals[i] <= inf + atol) continue;
      tau = std::min(tau, oracle::hull_distance(active));
    }
    const auto r = certify_qd(p);
    o.require(r.tau_sharp && std::abs(*r.tau_sharp - tau) <= 1e-8,
              "tau " + (r.tau_sharp ? format_g17(*r.tau_sharp) : std::string("unset")) +
                  " vs " + format_g17(tau));
  }
  return o;
}

Outcome c7() {
  Outcome o;
  ProblemInstance p(Expr::sum({Expr::abs(Expr::coordinate(2, 0)), Expr::abs(Expr::coordinate(2, 1))}),
                    vec({-2, -2}), vec({2, 2}), 41);
  p.g = Expr::affine(vec({1, 0}), -1);
  const auto r = certify_constrained(p);
  o.require(r.tau_sharp && std::abs(*r.tau_sharp - 1.0) <= 1e-12, "tau = 1");
  o.require(r.zeta_sharp && std::isfinite(*r.zeta_sharp) && *r.zeta_sharp > 0, "finite zeta > 0");
  o.require(r.sigma_checked && r.zeta_sound && *r.sigma_checked == *r.zeta_sound, "sigma = zeta");
  o.require(r.violation_count == 0, "no violations");

  const auto c1 = penalty_demcoqd(Expr::affine(scalar(1), -5), kX, scalar(-1), 1e-9);
  o.require(c1.case_id == 1 && relation_in(c1.set, Polytope::point(scalar(-1)), 0.0, false), "g<0, h<0 penalty");
  const Expr g6 = Expr::affine(scalar(2), -1);
  const Expr h6 = Expr::affine(scalar(3), 0);
  const auto c6 = penalty_demcoqd(g6, h6, scalar(1), 1e-9);
  const auto pen = [&](const Vector& y) { return std::max(0.0, g6.evaluate(y)) + std::abs(h6.evaluate(y)); };
  const double slope = oracle::richardson(pen, scalar(1), scalar(1));
  o.require(c6.case_id == 6 && relation_in(c6.set, Polytope::point(scalar(slope)), 1e-9, false), "g>0, h>0 penalty");
  return o;
}

Outcome c8(double* tau) {
  Outcome o;
  const Expr f = Expr::abs(Expr::sum({Expr::abs(kX), Expr::constant(1, -1)}));
  const auto r = certify_exhauster(ProblemInstance(f, scalar(-3), scalar(3), 1201));
  *tau = r.tau_sharp.value_or(std::nan(""));
  o.require(std::abs(*tau - 1.0) <= 1e-6, "tau_hat");
  o.require(r.violation_count == 0 && r.sigma_checked && *r.sigma_checked == *r.tau_sound,
            "sigma = tau_hat check");
  return o;
}

Outcome c9() {
  Outcome o;
  const std::vector<Vector> up = {scalar(1)};
  const double d2 = capped_cone_distance(Polytope::point(scalar(2)), up, 1.0).distance;
  const double d1 = capped_cone_distance(Polytope::point(scalar(-2)), up, 1.0).distance;
  const double o2 = oracle::dist0(oracle::Interval{2, 2} + oracle::Interval{0, 1});
  const double o1 = oracle::dist0(oracle::Interval{-2, -2} + oracle::Interval{0, 1});
  o.require(std::abs(d2 - o2) <= 1e-8, "{2}+[0,1]");
  o.require(std::abs(d1 - o1) <= 1e-8, "{-2}+[0,1]");
  return o;
}

Outcome c10() {
  Outcome o;
  const Expr phi = Expr::abs(Expr::sum({kX, Expr::scale(-1, Expr::affine(scalar(0.5), 1))}));
  const auto r = wsharp_check(ProblemInstance(phi, scalar(-10), scalar(10), 2001), 0.5);
  o.require(r.verdict == Verdict::Certified && r.violation_count == 0, "sigma 0.5");
  return o;
}

Outcome c11() {
  Outcome o;
  const char* problems[] = {
      R"({"version":1,"space_dim":1,"objective":{"op":"abs","arg":{"op":"abs","arg":{"op":"coord","index":0}}},
          "box":{"lo":[-3],"hi":[3]},"resolution":301})",
      R"({"version":1,"space_dim":2,"objective":{"op":"sum","args":[{"op":"abs","arg":{"op":"coord","index":0}},
          {"op":"norm2"}]},"constraints":{"g":{"op":"affine","a":[1,0],"b":-1},
          "polyhedron":[{"c":[0,1],"d":1}]},"box":{"lo":[-2,-2],"hi":[2,2]},"resolution":21,
          "options":{"errorbound":{"alpha":0}}})",
  };
  RunOptions opt;
  opt.sigma = 0.5;
  for (const char* text : problems) {
    const auto p = parse_problem_text(text);
    for (const char* cmd : {"certify-qd", "certify-exhauster", "slope", "wsharp-check",
                            "certify-constrained", "certify-constrained-exhauster", "errorbound"}) {
      if (!p.constrained() && (std::string(cmd).find("constrained") != std::string::npos ||
                               std::string(cmd) == "errorbound")) {
        continue;
      }
      const std::string first = report_to_json(execute(cmd, p, opt));
      setenv("WSHARP_THREADS", "1", 1);
      const std::string second = report_to_json(execute(cmd, p, opt));
      unsetenv("WSHARP_THREADS");
      o.require(first == second, std::string("byte mismatch for ") + cmd);
    }
  }
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* what, const std::function<Outcome()>& fn,
                          double budget_s = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && s > budget_s) o.require(false, "runtime budget exceeded");
    std::printf("criterion %2d: %s  %s (%.2f s)%s%s\n", id, o.pass ? "PASS" : "FAIL", what, s,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    if (!o.pass) ++failures;
  };

  const auto pairs = planar_pairs();
  double worst_h = 0.0;
  std::size_t corpus = 0;
  double tau8 = 0.0;
  report(1, "piecewise rational: direct check, slopes, tau_hat < 0.05", c1, 5.0);
  report(2, "difference laws on 200 planar pairs", [&] { return c2(pairs); }, 30.0);
  report(3, "sampled vs exact backend, Hausdorff <= 0.05", [&] {
    auto o = c3(pairs, &worst_h);
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("worst ") + format_g6(worst_h);
    return o;
  });
  report(4, "1D Clarke oracle on 50 interval pairs", c4);
  report(5, "slope >= inner Demcoqd distance on the corpus", [&] {
    auto o = c5(&corpus);
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(corpus) + " functions";
    return o;
  });
  report(6, "max-of-affine reduction", c6);
  report(7, "constrained certificate, penalty signs g<0,h<0 and g>0,h>0", c7);
  report(8, "exhauster certificate for ||x|-1|", [&] {
    auto o = c8(&tau8);
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("tau_hat ") + format_g17(tau8);
    return o;
  });
  report(9, "capped cone distances 2 and 1", c9);
  report(10, "fixed-point displacement, sigma 0.5", c10);
  report(11, "byte-identical JSON across runs", c11);
  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures == 0 ? 0 : 1;
}
