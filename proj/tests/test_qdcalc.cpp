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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wsharp/qdcalc.hpp"

using namespace wsharp;
using oracle::poly;
using oracle::scalar;
using oracle::vec;

namespace {

bool same_set(const Polytope& a, const Polytope& b, double tol = 1e-12) {
  return set_compare(a, b, tol).relation == SetRelation::Equal;
}

const Expr kX = Expr::affine(scalar(1), 0);

}  // namespace

TEST_CASE("evaluation") {
  CHECK(Expr::abs(kX).evaluate(scalar(-2)) == 2.0);
  CHECK(Expr::max({kX, Expr::affine(scalar(-1), 0)}).evaluate(scalar(3)) == 3.0);
  const Expr cancel = Expr::sum({Expr::norm2(2), Expr::scale(-1, Expr::norm2(2))});
  CHECK(cancel.evaluate(vec({0.3, -4})) == 0.0);
  CHECK(Expr::rational(1, {{1, {2}}, {1, {1}}, {1, {0}}}, {{1, {1}}, {1, {0}}})
            .evaluate(scalar(1)) == doctest::Approx(1.5));
  const Expr pw = Expr::piecewise(0, {0.0}, {Expr::constant(1, 0), kX});
  CHECK(pw.evaluate(scalar(-1)) == 0.0);
  CHECK(pw.evaluate(scalar(0)) == 0.0);
  CHECK(pw.evaluate(scalar(2)) == 2.0);
  CHECK_THROWS_AS(kX.evaluate(vec({1, 2})), Error);
  CHECK_THROWS_AS(Expr::sum({kX, Expr::norm2(2)}), Error);
}

TEST_CASE("quasidifferentials of atoms and rules") {
  auto q = quasidiff(Expr::affine(vec({2, -1}), 4), vec({0.2, 0.3}));
  CHECK(same_set(q.sub, poly({{2, -1}})));
  CHECK(same_set(q.sup, Polytope::origin(2)));

  auto qa = quasidiff(Expr::abs(kX), scalar(0));
  CHECK(same_set(qa.sub, Polytope::interval(0, 2)));
  CHECK(same_set(qa.sup, Polytope::point(scalar(-1))));

  auto qn = quasidiff(Expr::norm2(2), vec({0, 0}));
  CHECK(qn.approx());
  CHECK(same_set(qn.sup, Polytope::origin(2)));
  auto qn1 = quasidiff(Expr::norm2(2), vec({3, 4}));
  CHECK(same_set(qn1.sub, poly({{0.6, 0.8}}), 1e-15));
  CHECK_FALSE(qn1.approx());

  auto qpw = quasidiff(Expr::piecewise(0, {0.0}, {Expr::constant(1, 0), kX}), scalar(1));
  CHECK(same_set(qpw.sub, Polytope::point(scalar(1))));
  CHECK_THROWS_AS(quasidiff(Expr::piecewise(0, {0.0}, {Expr::constant(1, 0), kX}), scalar(0)),
                  Error);
}

TEST_CASE("directional derivative of a pair") {
  CHECK(dir_derivative(make_quasidiff(Polytope::interval(-1, 1), Polytope::origin(1)), scalar(1)) == 1.0);
  CHECK(dir_derivative(make_quasidiff(Polytope::origin(1), Polytope::interval(-1, 1)), scalar(2)) == -2.0);
  CHECK(dir_derivative(make_quasidiff(Polytope::point(scalar(3)), Polytope::origin(1)), scalar(-1)) == -3.0);
}

TEST_CASE("class equality") {
  const QuasiDiff q = make_quasidiff(poly({{0, 0}, {1, 2}}), poly({{-1, 0}, {0, 1}}));
  CHECK(qd_equiv(q, q, 1e-12));
  const Polytope e = poly({{1, 1}, {-2, 0}, {0, 3}});
  // Adding E to sub and -E to sup leaves s(.|sub) - s(.|-sup) unchanged.
  const QuasiDiff shifted = make_quasidiff(minkowski_sum(q.sub, e), minkowski_sum(q.sup, reflect(e)));
  CHECK(qd_equiv(q, shifted, 1e-9));
  CHECK_FALSE(qd_equiv(make_quasidiff(Polytope::interval(0, 1), Polytope::origin(1)),
                       make_quasidiff(Polytope::interval(0, 2), Polytope::origin(1)), 1e-12));
}

TEST_CASE("positive part and absolute value rules") {
  const QuasiDiff id = make_quasidiff(Polytope::point(scalar(1)), Polytope::origin(1));
  auto p0 = qd_pospart(id, 0.0, 1e-9);
  CHECK(same_set(p0.sub, Polytope::interval(0, 1)));
  CHECK(same_set(p0.sup, Polytope::origin(1)));
  auto pn = qd_pospart(id, -5.0, 1e-9);
  CHECK(same_set(pn.sub, Polytope::origin(1)));
  CHECK(same_set(pn.sup, Polytope::origin(1)));
  auto pp = qd_pospart(id, 5.0, 1e-9);
  CHECK(same_set(pp.sub, id.sub));
  CHECK(same_set(pp.sup, id.sup));

  auto a0 = qd_abs(id, 0.0, 1e-9);
  CHECK(same_set(a0.sub, Polytope::interval(0, 2)));
  CHECK(same_set(a0.sup, Polytope::point(scalar(-1))));
  auto an = qd_abs(id, -3.0, 1e-9);
  CHECK(qd_equiv(an, qd_neg(id), 1e-12));
  auto ap = qd_abs(id, 3.0, 1e-9);
  CHECK(qd_equiv(ap, id, 1e-12));
}

TEST_CASE("convex specialization: max of affine") {
  const Expr f = Expr::max({Expr::affine(vec({1, 0}), 0), Expr::affine(vec({0, 1}), 0),
                            Expr::affine(vec({-1, -1}), 0), Expr::affine(vec({5, 5}), -10)});
  auto q = quasidiff(f, vec({0, 0}));
  CHECK(same_set(q.sub, poly({{1, 0}, {0, 1}, {-1, -1}}), 1e-12));
  CHECK(same_set(q.sup, Polytope::origin(2)));
}

TEST_CASE("min and max duality") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Expr> fs, neg;
    for (int k = 0; k < 4; ++k) {
      const Expr a = Expr::affine(vec({u(rng), u(rng)}), 0.0);
      const Expr piece = k % 2 ? Expr::abs(a) : a;
      fs.push_back(piece);
      neg.push_back(Expr::neg(piece));
    }
    const Vector x = trial % 2 ? Vector::Zero(2) : vec({u(rng), u(rng)});
    const auto lhs = quasidiff(Expr::min(fs), x);
    const auto rhs = qd_neg(quasidiff(Expr::max(neg), x));
    CHECK(qd_equiv(lhs, rhs, 1e-9));
  }
}

TEST_CASE("property: directional derivatives match Richardson finite differences") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n01;
  for (const auto& entry : oracle::corpus()) {
    CAPTURE(entry.name);
    const int dim = entry.e.dim();
    std::vector<Vector> pts;
    for (double a = -1.5; a <= 1.5; a += 0.5) {
      if (dim == 1) {
        pts.push_back(scalar(a));
      } else {
        for (double b = -1.5; b <= 1.5; b += 0.5) pts.push_back(vec({a, b}));
      }
    }
    const auto f = [&](const Vector& y) { return entry.e.evaluate(y); };
    for (const auto& x : pts) {
      const auto q = quasidiff(entry.e, x);
      if (q.approx()) continue;  // curved subdifferential stand-in
      for (int k = 0; k < 20; ++k) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = n01(rng);
        const double fd = oracle::richardson(f, x, v);
        const double dd = dir_derivative(q, v);
        CAPTURE(x.transpose());
        CHECK(std::abs(fd - dd) <= 1e-5 * (1 + std::abs(dd)));
      }
    }
  }
}

TEST_CASE("property: negation swaps and reflects") {
  for (const auto& entry : oracle::corpus()) {
    const Vector x = Vector::Constant(entry.e.dim(), 0.5);
    const auto q = quasidiff(entry.e, x);
    const auto n = quasidiff(Expr::neg(entry.e), x);
    CHECK(same_set(n.sub, reflect(q.sup), 1e-12));
    CHECK(same_set(n.sup, reflect(q.sub), 1e-12));
  }
}
