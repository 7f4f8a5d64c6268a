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

#include <cmath>
#include <numbers>

#include "wsharp/geometry.hpp"

namespace wsharp {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Generalized golden ratio: the positive root of x^(d+1) = x + 1.
double generalized_phi(int d) {
  double x = 2.0;
  for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / (d + 1));
  return x;
}

}  // namespace

std::vector<Vector> direction_set(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "direction_set: dim and count must be positive");
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uint64_t state = seed;

  if (dim == 1) {
    for (int k = 0; k < count; ++k) {
      out.push_back(Vector::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
    }
    return out;
  }

  if (dim == 2) {
    const double step = 2.0 * std::numbers::pi / count;
    const double offset = unit_uniform(state) * step;
    for (int k = 0; k < count; ++k) {
      const double a = offset + step * k;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }

  // Kronecker sequence in [0,1)^m, m even, mapped to Gaussians pairwise.
  const int m = dim + (dim % 2);
  const double phi = generalized_phi(m);
  std::vector<double> alpha(static_cast<std::size_t>(m));
  std::vector<double> shift(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    alpha[j] = std::fmod(1.0 / std::pow(phi, j + 1), 1.0);
    shift[j] = unit_uniform(state);
  }
  for (int k = 1; out.size() < static_cast<std::size_t>(count); ++k) {
    Vector z(m);
    for (int j = 0; j < m; j += 2) {
      double u1 = std::fmod(shift[j] + k * alpha[j], 1.0);
      double u2 = std::fmod(shift[j + 1] + k * alpha[j + 1], 1.0);
      u1 = std::max(u1, 1e-300);
      const double r = std::sqrt(-2.0 * std::log(u1));
      z[j] = r * std::cos(2.0 * std::numbers::pi * u2);
      z[j + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    Vector v = z.head(dim);
    const double n = v.norm();
    if (n < 1e-12) continue;
    out.push_back(v / n);
  }
  return out;
}

}  // namespace wsharp
