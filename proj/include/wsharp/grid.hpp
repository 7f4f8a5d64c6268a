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

#include <cstddef>
#include <functional>
#include <vector>

#include "wsharp/geometry.hpp"

namespace wsharp {

// Tensor-product grid over a box with `resolution` points per axis,
// endpoints included. Flat indices run with the first axis fastest.
class Grid {
 public:
  Grid(Vector lo, Vector hi, int resolution);

  int dim() const { return static_cast<int>(lo_.size()); }
  int resolution() const { return res_; }
  std::size_t size() const { return size_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double step(int axis) const;

  Vector point(std::size_t flat) const;
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t flat_index(const std::vector<int>& idx) const;

  // Axis neighbours (at most 2 * dim).
  std::vector<std::size_t> neighbours(std::size_t flat) const;

  // Every other point along each axis.
  bool on_coarse_subgrid(std::size_t flat) const;

 private:
  Vector lo_, hi_;
  int res_;
  std::size_t size_;
};

// Exact Euclidean distance from every grid point to the nearest point with
// member[i] != 0 (+inf when there is none). Brute force for small
// query x member products, a separable squared-distance transform above.
std::vector<double> grid_distance_to_set(const Grid& grid,
                                         const std::vector<char>& member);

// Brute-force reference implementation of the above.
std::vector<double> grid_distance_to_set_brute(const Grid& grid,
                                               const std::vector<char>& member);

// Thread count from WSHARP_THREADS (>= 1), else hardware concurrency.
int worker_threads();

// Runs fn(i) for i in [0, n). Each index is visited exactly once; callers
// write results into per-index slots so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wsharp
