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
#include "wsharp/geometry.hpp"

using namespace wsharp;
using oracle::poly;
using oracle::scalar;
using oracle::vec;

namespace {

bool same_set(const Polytope& a, const Polytope& b, double tol = 1e-12) {
  return set_compare(a, b, tol).relation == SetRelation::Equal;
}

}  // namespace

TEST_CASE("support values") {
  CHECK(support_value(poly({{1, 0}, {0, 1}}), vec({1, 1})) == 1.0);
  CHECK(support_value(Polytope::origin(2), vec({3, -7})) == 0.0);
  CHECK(support_value(Polytope::interval(-1, 2), scalar(-1)) == 1.0);
  CHECK_THROWS_AS(support_value(Polytope::interval(-1, 2), vec({1, 1})), Error);
}

TEST_CASE("exposed vertices and ties") {
  const Polytope box = poly({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  auto edge = exposed_vertices(box, vec({1, 0}), 1e-12);
  CHECK(edge.tie);
  CHECK(edge.vertices.size() == 2);
  auto corner = exposed_vertices(box, vec({1, 0.5}), 1e-12);
  CHECK_FALSE(corner.tie);
  REQUIRE(corner.vertices.size() == 1);
  CHECK(corner.vertices[0] == vec({1, 1}));
  auto seg = exposed_vertices(poly({{2, 1}, {3, -1}}), vec({1, 0}), 1e-12);
  CHECK_FALSE(seg.tie);
  CHECK(seg.vertices[0] == vec({3, -1}));
}

TEST_CASE("minkowski sums, scaling, hulls") {
  CHECK(same_set(minkowski_sum(Polytope::interval(0, 1), Polytope::interval(2, 3)),
                 Polytope::interval(2, 4)));
  const Polytope tri = poly({{0, 0}, {1, 0}, {0, 1}});
  CHECK(same_set(minkowski_sum(Polytope::origin(2), tri), tri));
  const Polytope box = poly({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(same_set(minkowski_sum(box, box), scale(2.0, box)));
  CHECK(same_set(scale(0.0, tri), Polytope::origin(2)));
  CHECK(same_set(scale(2.0, Polytope::interval(-1, 1)), Polytope::interval(-2, 2)));
  CHECK(same_set(scale(-1.0, poly({{1, 0}})), poly({{-1, 0}})));
  CHECK(same_set(conv_union(Polytope::interval(0, 1), Polytope::interval(2, 3)),
                 Polytope::interval(0, 3)));
  CHECK(same_set(conv_union(Polytope::point(vec({1, 2})), Polytope::point(vec({1, 2}))),
                 Polytope::point(vec({1, 2}))));
  const Polytope pts[] = {poly({{0, 0}}), poly({{1, 0}}), poly({{0, 1}})};
  const Polytope hull = conv_union(pts);
  CHECK(hull.size() == 3);
  CHECK(same_set(hull, tri));
}

TEST_CASE("min-norm point") {
  const Polytope box = poly({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(min_norm_point(box).distance == 0.0);
  auto m = min_norm_point(poly({{1, 0}, {0, 1}}));
  CHECK(m.distance == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK((m.point - vec({0.5, 0.5})).norm() < 1e-10);

  // Segment sweep reference for conv{(2,1),(3,-1)}.
  const auto [sweep, t] = oracle::segment_sweep(vec({2, 1}), vec({3, -1}));
  auto s = min_norm_point(poly({{2, 1}, {3, -1}}));
  CHECK(t == 0.0);
  CHECK(s.distance == doctest::Approx(sweep).epsilon(1e-12));
  CHECK(s.distance == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(s.point == vec({2, 1}));
  CHECK_THROWS_AS(min_norm_point(box, 0.0), Error);
}

TEST_CASE("set comparison") {
  const Polytope p = poly({{0, 0}, {1, 0}, {0, 1}});
  auto eq = set_compare(p, p, 1e-12);
  CHECK(eq.relation == SetRelation::Equal);
  CHECK(eq.hausdorff == 0.0);
  CHECK(set_compare(Polytope::interval(0, 1), Polytope::interval(0, 3), 1e-12).relation ==
        SetRelation::Subset);
  CHECK(set_compare(Polytope::interval(0, 3), Polytope::interval(0, 1), 1e-12).relation ==
        SetRelation::Superset);
  CHECK(set_compare(Polytope::interval(-1, 2), Polytope::interval(0, 1), 1e-12).relation ==
        SetRelation::Superset);
  CHECK(set_compare(Polytope::interval(-1, 0.5), Polytope::interval(0, 1), 1e-12).relation ==
        SetRelation::Incomparable);
  // Support-based path in 3D.
  const Polytope cube = poly({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                              {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
  const Polytope corner = poly({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(set_compare(corner, cube, 1e-9).relation == SetRelation::Subset);
  CHECK(set_compare(cube, cube, 1e-9).relation == SetRelation::Equal);
}

TEST_CASE("polytope input validation") {
  CHECK_THROWS_AS(Polytope({}), Error);
  CHECK_THROWS_AS(Polytope({vec({1, 2}), scalar(1)}), Error);
  CHECK_THROWS_AS(Polytope({vec({1, std::nan("")})}), Error);
  CHECK_THROWS_AS(minkowski_sum(Polytope::interval(0, 1), Polytope::origin(2)), Error);
}

TEST_CASE("direction sets are deterministic unit vectors") {
  for (int dim : {1, 2, 3, 5}) {
    auto a = direction_set(dim, 64, kDirectionSeed);
    auto b = direction_set(dim, 64, kDirectionSeed);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == b[i]);
      CHECK(a[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: support additivity over random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int dim : {1, 2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Polytope p = oracle::random_polytope(rng, dim, 10, 3.0);
      const Polytope q = oracle::random_polytope(rng, dim, 10, 3.0);
      const Polytope s = minkowski_sum(p, q);
      for (int k = 0; k < 100; ++k) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = u(rng);
        const double lhs = support_value(s, v);
        const double rhs = oracle::support(p.vertices(), v) + oracle::support(q.vertices(), v);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("property: min-norm variational inequality and 2D hull oracle") {
  std::mt19937_64 rng(12);
  for (int dim : {1, 2, 3}) {
    for (int trial = 0; trial < 60; ++trial) {
      Polytope p = oracle::random_polytope(rng, dim, 12, 2.0);
      Vector shift(dim);
      for (int i = 0; i < dim; ++i) shift[i] = 1.5 * ((trial + i) % 3 - 1);
      p = translate(p, shift);
      const auto m = min_norm_point(p);
      for (const auto& q : p.vertices()) {
        CHECK(m.point.dot(q - m.point) >= -kMinNormTol * (1 + q.norm()));
      }
      if (dim <= 2) {
        CHECK(m.distance == doctest::Approx(oracle::hull_distance(p.vertices())).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("property: canonicalization is idempotent and support-preserving") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int dim : {1, 2, 3}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Polytope p = oracle::random_polytope(rng, dim, 15);
      const Polytope c1 = canonicalize(p);
      const Polytope c2 = canonicalize(c1);
      CHECK(c1.canonical());
      CHECK(c1.size() == c2.size());
      CHECK(c1.size() <= p.size());
      for (int k = 0; k < 50; ++k) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = u(rng);
        CHECK(std::abs(support_value(c1, v) - support_value(p, v)) <= 1e-12);
      }
      // No canonical vertex lies in the hull of the others.
      if (c1.size() > 1) {
        for (std::size_t i = 0; i < c1.size(); ++i) {
          std::vector<Vector> rest;
          for (std::size_t j = 0; j < c1.size(); ++j) {
            if (j != i) rest.push_back(c1.vertex(j) - c1.vertex(i));
          }
          CHECK(min_norm_point(Polytope(rest)).distance > 1e-12);
        }
      }
    }
  }
}

TEST_CASE("property: sums and hulls commute and associate") {
  std::mt19937_64 rng(14);
  for (int dim : {1, 2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Polytope a = oracle::random_polytope(rng, dim, 6);
      const Polytope b = oracle::random_polytope(rng, dim, 6);
      const Polytope c = oracle::random_polytope(rng, dim, 6);
      CHECK(same_set(minkowski_sum(a, b), minkowski_sum(b, a), 1e-9));
      CHECK(same_set(minkowski_sum(minkowski_sum(a, b), c),
                     minkowski_sum(a, minkowski_sum(b, c)), 1e-9));
      CHECK(same_set(conv_union(a, b), conv_union(b, a), 1e-9));
      CHECK(same_set(conv_union(conv_union(a, b), c), conv_union(a, conv_union(b, c)), 1e-9));
    }
  }
}
