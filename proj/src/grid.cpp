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

#include "wsharp/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace wsharp {

Grid::Grid(Vector lo, Vector hi, int resolution)
    : lo_(std::move(lo)), hi_(std::move(hi)), res_(resolution) {
  check_same_dim("Grid", lo_.size(), hi_.size());
  if (lo_.size() < 1) throw Error(ErrorCode::InvalidArgument, "Grid: empty box");
  require_finite(lo_, "Grid");
  require_finite(hi_, "Grid");
  if ((lo_.array() > hi_.array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "Grid: box has low > high");
  }
  if (res_ < 2) {
    throw Error(ErrorCode::InvalidArgument, "Grid: resolution must be >= 2");
  }
  const double total = std::pow(static_cast<double>(res_), dim());
  if (total > 5e7) {
    throw Error(ErrorCode::InvalidArgument, "Grid: too many points");
  }
  size_ = static_cast<std::size_t>(total + 0.5);
}

double Grid::step(int axis) const {
  return (hi_[axis] - lo_[axis]) / (res_ - 1);
}

std::vector<int> Grid::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim()));
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(flat % res_);
    flat /= res_;
  }
  return idx;
}

std::size_t Grid::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int a = dim() - 1; a >= 0; --a) flat = flat * res_ + idx[a];
  return flat;
}

Vector Grid::point(std::size_t flat) const {
  Vector x(dim());
  for (int a = 0; a < dim(); ++a) {
    const int i = static_cast<int>(flat % res_);
    flat /= res_;
    // Symmetric boxes put an exact 0 at the centre for odd resolutions.
    x[a] = i == res_ - 1 ? hi_[a]
                         : lo_[a] + (hi_[a] - lo_[a]) * i / (res_ - 1.0);
  }
  return x;
}

std::vector<std::size_t> Grid::neighbours(std::size_t flat) const {
  std::vector<std::size_t> out;
  std::size_t stride = 1;
  std::size_t rest = flat;
  for (int a = 0; a < dim(); ++a) {
    const int i = static_cast<int>(rest % res_);
    rest /= res_;
    if (i > 0) out.push_back(flat - stride);
    if (i + 1 < res_) out.push_back(flat + stride);
    stride *= res_;
  }
  return out;
}

bool Grid::on_coarse_subgrid(std::size_t flat) const {
  for (int a = 0; a < dim(); ++a) {
    if ((flat % res_) % 2 != 0) return false;
    flat /= res_;
  }
  return true;
}

std::vector<double> grid_distance_to_set_brute(
    const Grid& grid, const std::vector<char>& member) {
  std::vector<Vector> targets;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (member[i]) targets.push_back(grid.point(i));
  }
  std::vector<double> out(grid.size(), std::numeric_limits<double>::infinity());
  parallel_for(grid.size(), [&](std::size_t i) {
    if (member[i]) {
      out[i] = 0.0;
      return;
    }
    const Vector x = grid.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : targets) best = std::min(best, (x - t).squaredNorm());
    out[i] = std::sqrt(best);
  });
  return out;
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas on a uniform line.
void squared_transform_1d(std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  std::vector<double> out(n, inf);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    const double pq = q * h;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s;
    for (;;) {
      const double pv = v[k] * h;
      s = ((f[q] + pq * pq) - (f[v[k]] + pv * pv)) / (2.0 * (pq - pv));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    if (s <= z[k]) {
      v[k] = q;
      z[k] = -inf;
      z[k + 1] = inf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    const double pq = q * h;
    while (z[j + 1] < pq) ++j;
    const double d = pq - v[j] * h;
    out[q] = d * d + f[v[j]];
  }
  f = std::move(out);
}

}  // namespace

std::vector<double> grid_distance_to_set(const Grid& grid,
                                         const std::vector<char>& member) {
  const std::size_t members =
      static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
  const double inf = std::numeric_limits<double>::infinity();
  if (members == 0) return std::vector<double>(grid.size(), inf);
  if (grid.size() < 100000 &&
      static_cast<double>(grid.size()) * static_cast<double>(members) < 2e7) {
    return grid_distance_to_set_brute(grid, member);
  }
  std::vector<double> sq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = member[i] ? 0.0 : inf;
  const int res = grid.resolution();
  std::size_t stride = 1;
  for (int a = 0; a < grid.dim(); ++a) {
    const double h = grid.step(a);
    std::vector<double> line(static_cast<std::size_t>(res));
    for (std::size_t base = 0; base < grid.size(); ++base) {
      // Visit each line once: its first element has index 0 along axis a.
      if ((base / stride) % res != 0) continue;
      for (int q = 0; q < res; ++q) line[q] = sq[base + q * stride];
      squared_transform_1d(line, h);
      for (int q = 0; q < res; ++q) sq[base + q * stride] = line[q];
    }
    stride *= res;
  }
  for (auto& d : sq) d = std::sqrt(d);
  return sq;
}

int worker_threads() {
  if (const char* env = std::getenv("WSHARP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int threads =
      static_cast<int>(std::min<std::size_t>(worker_threads(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wsharp
