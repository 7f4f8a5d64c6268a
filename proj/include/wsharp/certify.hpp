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

// Grid-empirical checks of weak sharp minimality: argmin detection, the
// direct inequality, strong slopes, nondegeneracy certificates built on
// quasidifferentials and exhausters, error bounds, and constrained
// certificates via exact penalization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsharp/demyanov.hpp"
#include "wsharp/exhauster.hpp"
#include "wsharp/geometry.hpp"
#include "wsharp/grid.hpp"
#include "wsharp/qdcalc.hpp"
#include "wsharp/report.hpp"

namespace wsharp {

// Rows <c_i, x> <= d_i.
struct Polyhedron {
  std::vector<Vector> normals;
  std::vector<double> offsets;
};

struct Tolerances {
  // Defaults to 1e-6 (1 + |inf_f_hat|) when unset.
  std::optional<double> argmin;
  double tie = 1e-9;
  double feasibility = 1e-8;
  // Estimate the Lipschitz rank on the grid when none is supplied.
  bool estimate_lipschitz = true;
};

struct ErrorBoundOptions {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> tau;
};

// User exhauster: applies at `at` when given, otherwise everywhere.
struct ExhausterOverride {
  std::optional<Vector> at;
  std::vector<Polytope> members;
};

struct ProblemInstance {
  ProblemInstance(Expr objective, Vector lo, Vector hi, int resolution);

  Expr objective;
  std::optional<Expr> g;
  std::optional<Expr> h;
  std::optional<Polyhedron> polyhedron;
  Vector lo;
  Vector hi;
  int resolution;
  Tolerances tol;
  std::optional<double> lipschitz;
  std::optional<double> lambda;
  std::optional<double> sigma;
  std::uint64_t seed = kDirectionSeed;
  ErrorBoundOptions errorbound;
  std::vector<ExhausterOverride> exhauster;
  std::vector<Vector> slope_at;

  int dim() const { return objective.dim(); }
  bool has_functional_constraints() const { return g || h; }
  bool constrained() const { return g || h || polyhedron; }
  // Throws on empty box, bad resolution, dimension mismatch.
  void validate() const;
  Grid grid() const { return Grid(lo, hi, resolution); }
  // True when x satisfies every constraint within the feasibility tolerance.
  bool feasible(const Vector& x) const;
};

struct ArgminResult {
  double inf_f_hat = 0.0;
  double tol = 0.0;
  std::vector<double> values;   // f at every grid point
  std::vector<char> feasible;   // all ones in unconstrained mode
  std::vector<char> member;     // argmin membership
  std::size_t count = 0;
};

// Grid minimum of f (over feasible points when `constrained`) and the
// points within argmin_tol of it.
ArgminResult detect_argmin(const ProblemInstance& p, const Grid& grid,
                           bool constrained);

struct WsharpCheck {
  std::vector<Violation> violations;
  std::size_t violation_count = 0;
  // min over non-argmin points of (f - inf) / dist; +inf when vacuous.
  double sigma_hat = 0.0;
  // Violations of the sublevel form on the alpha grid.
  std::size_t sublevel_violations = 0;
  std::vector<double> dist;
};

// sigma dist(x, argmin) <= f(x) - inf + slack over the considered grid
// points, plus the sublevel form at alpha = inf + argmin_tol {1, 10, 100}.
// Slack is argmin_tol.
WsharpCheck verify_wsharp_inequality(const ProblemInstance& p,
                                     const Grid& grid, const ArgminResult& a,
                                     double sigma);

struct SlopeSchedule {
  int k_last = 18;
  // Only the finest scales shape the tail maximum.
  int tail_scales = 3;
  int steps_per_scale = 5;
  // 0 picks 2 (1D), 256 (2D) or 512 directions.
  int directions = 0;
};

// Numerical limsup of (f(x) - f(y)) / |x - y| as y -> x; 0 when no sampled
// decrease is seen at the two finest scales, +inf on blow-up.
double strong_slope_estimate(const ScalarFn& f, const Vector& x,
                             const SlopeSchedule& s = {},
                             std::uint64_t seed = kDirectionSeed);

// Sign-case assembly of Demcoqd[g]_+ + Demcoqd|h| at x.
struct PenaltyDemcoqd {
  Polytope set;
  Polytope outer;
  int case_id = 0;  // 1-7 off the feasible set, 0 on it
  std::string label;
  bool approx = false;
  DemyanovBackend backend = DemyanovBackend::Exact1d;
};

PenaltyDemcoqd penalty_demcoqd(const std::optional<Expr>& g,
                               const std::optional<Expr>& h, const Vector& x,
                               double tie_tol,
                               const DemyanovOptions& opt = {});

// Case number for the sign pair (sg, sh) in {-1, 0, 1}; 0 when feasible.
int penalty_case(int sign_g, int sign_h);

struct CappedConeResult {
  double distance = 0.0;     // certified lower bound
  double upper = 0.0;        // norm of the best iterate
  Vector point;              // best iterate
  int iterations = 0;
  bool converged = false;
};

// dist(0, E + lambda (cone(generators) ∩ B)) by fully corrective
// conditional gradient. Cone projections are NNLS solves.
CappedConeResult capped_cone_distance(const Polytope& e,
                                      const std::vector<Vector>& generators,
                                      double lambda, double tol = 1e-12,
                                      int max_iterations = 200);

struct ProbePoint {
  Vector x;
  bool looks_differentiable = false;
  bool discontinuous = false;
  double max_asymmetry = 0.0;
};

// Linearity test f'(x;v) + f'(x;-v) ~ 0 at grid-boundary argmin points.
std::vector<ProbePoint> smoothness_probe(const ProblemInstance& p,
                                         const Grid& grid,
                                         const ArgminResult& a);

// Max pairwise difference quotient (axis and diagonal neighbours on large
// grids). Returns the value and a source label.
std::pair<double, std::string> estimate_lipschitz(const Grid& grid,
                                                  const std::vector<double>& f);

// Per-point dump for --emit-csv: coordinates, f, dist to argmin, condition.
struct GridTrace {
  std::string condition_name;
  std::vector<std::vector<double>> rows;
};

CertificateReport wsharp_check(const ProblemInstance& p, double sigma,
                               GridTrace* trace = nullptr);
CertificateReport certify_qd(const ProblemInstance& p,
                             GridTrace* trace = nullptr);
CertificateReport certify_slope(const ProblemInstance& p,
                                GridTrace* trace = nullptr);
CertificateReport certify_exhauster(const ProblemInstance& p,
                                    GridTrace* trace = nullptr);
CertificateReport check_error_bound(const ProblemInstance& p,
                                    GridTrace* trace = nullptr);
CertificateReport certify_constrained(const ProblemInstance& p,
                                      GridTrace* trace = nullptr);
CertificateReport certify_constrained_exhauster(const ProblemInstance& p,
                                                GridTrace* trace = nullptr);

}  // namespace wsharp
