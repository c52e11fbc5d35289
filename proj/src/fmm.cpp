// Copyright 2026 The EchoNav Authors
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

#include "echonav/fmm.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include "echonav/io.hpp"

namespace echonav {

namespace {

enum class MarchState : uint8_t { kFar, kTrial, kKnown };

// One axis/diagonal simplex. The minimizer is the point on the segment
// between the two neighbor centers the characteristic passes through; the
// closed form below is that minimum. Either input may be +infinity.
double simplex_candidate(double axis, double diag, double h) {
  if (std::isinf(axis)) {
    return std::isinf(diag) ? diag : diag + h * std::numbers::sqrt2;
  }
  if (std::isinf(diag)) return axis + h;
  const double delta = axis - diag;
  if (delta <= 0.0) return axis + h;
  if (delta >= h / std::numbers::sqrt2) return diag + h * std::numbers::sqrt2;
  return axis + std::sqrt(h * h - delta * delta);
}

struct Solver {
  const NavMask& mask;
  std::vector<double>& t;
  std::vector<MarchState> state;

  bool open(Cell c) const { return mask.in_bounds(c) && mask.is_navigable(c); }

  double known_value(Cell c) const {
    if (!open(c) || state[mask.index(c)] != MarchState::kKnown) return kUnreachable;
    return t[mask.index(c)];
  }

  // Minimum over the eight simplexes at c. A diagonal neighbor counts only
  // when both cells flanking its corner are navigable; paths may not cut
  // corners the motion model cannot cut.
  double update(Cell c) const {
    const double h = mask.resolution;
    double best = kUnreachable;
    for (int sx : {-1, 1}) {
      for (int sy : {-1, 1}) {
        const Cell ax{c.x + sx, c.y};
        const Cell ay{c.x, c.y + sy};
        const Cell dg{c.x + sx, c.y + sy};
        const double vx = known_value(ax);
        const double vy = known_value(ay);
        const double vd = open(ax) && open(ay) ? known_value(dg) : kUnreachable;
        best = std::min(best, simplex_candidate(vx, vd, h));
        best = std::min(best, simplex_candidate(vy, vd, h));
      }
    }
    return best;
  }
};

}  // namespace

NavMask NavMask::from_grid(const OccupancyGrid& g) {
  NavMask m{g.width(), g.height(), g.resolution(), g.origin(), {}};
  m.navigable.resize(static_cast<size_t>(g.width()) * g.height());
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      m.navigable[m.index({x, y})] = g.is_free({x, y}) ? 1 : 0;
    }
  }
  return m;
}

NavMask NavMask::from_observed(const ObservedMap& om) {
  NavMask m{om.width(), om.height(), om.resolution(), om.origin(), {}};
  m.navigable.resize(static_cast<size_t>(om.width()) * om.height());
  for (int y = 0; y < om.height(); ++y) {
    for (int x = 0; x < om.width(); ++x) {
      m.navigable[m.index({x, y})] = om.state({x, y}) != CellState::kOccupied ? 1 : 0;
    }
  }
  return m;
}

Cell DistanceField::world_to_cell(Vec2 point) const {
  const long cx = std::lround((point.x - origin.x) / resolution);
  const long cy = std::lround((point.y - origin.y) / resolution);
  if (cx < 0 || cx >= width || cy < 0 || cy >= height) {
    throw std::out_of_range("outside world: point (" + format_double(point.x) + ", " +
                            format_double(point.y) + ")");
  }
  return Cell{static_cast<int>(cx), static_cast<int>(cy)};
}

DistanceField fmm_solve(const NavMask& mask, const std::vector<Cell>& sources) {
  const size_t n = mask.navigable.size();
  DistanceField field{mask.width, mask.height, mask.resolution, mask.origin,
                      {},         std::vector<double>(n, kUnreachable)};
  Solver solver{mask, field.values, std::vector<MarchState>(n, MarchState::kFar)};

  for (const Cell s : sources) {
    if (!mask.in_bounds(s) || !mask.is_navigable(s)) continue;
    field.sources.push_back(s);
    field.values[mask.index(s)] = 0.0;
    solver.state[mask.index(s)] = MarchState::kKnown;
  }
  if (field.sources.empty()) throw std::invalid_argument("no navigable source");

  // Min-heap with lazy deletion; equal values pop in cell-index order.
  using Entry = std::pair<double, size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  auto relax_around = [&](Cell c) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{c.x + dx, c.y + dy};
        if (!solver.open(nb) || solver.state[mask.index(nb)] == MarchState::kKnown) {
          continue;
        }
        const double v = solver.update(nb);
        if (v < field.values[mask.index(nb)]) {
          field.values[mask.index(nb)] = v;
          solver.state[mask.index(nb)] = MarchState::kTrial;
          heap.emplace(v, mask.index(nb));
        }
      }
    }
  };

  for (const Cell s : field.sources) relax_around(s);
  while (!heap.empty()) {
    const auto [value, idx] = heap.top();
    heap.pop();
    if (solver.state[idx] == MarchState::kKnown) continue;  // stale entry
    solver.state[idx] = MarchState::kKnown;
    relax_around({static_cast<int>(idx % mask.width), static_cast<int>(idx / mask.width)});
  }
  return field;
}

DistanceField fmm_solve(const NavMask& mask, Cell source) {
  return fmm_solve(mask, std::vector<Cell>{source});
}

Cell nearest_navigable(const NavMask& mask, Cell cell) {
  if (!mask.in_bounds(cell)) throw std::invalid_argument("cell out of bounds");
  if (mask.is_navigable(cell)) return cell;
  std::vector<uint8_t> seen(mask.navigable.size(), 0);
  std::vector<Cell> layer{cell};
  seen[mask.index(cell)] = 1;
  while (!layer.empty()) {
    std::optional<Cell> best;
    for (const Cell c : layer) {
      if (mask.is_navigable(c) && (!best || row_major_less(c, *best))) best = c;
    }
    if (best) return *best;
    std::vector<Cell> next;
    for (const Cell c : layer) {
      const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
      for (const Cell nb : nbrs) {
        if (mask.in_bounds(nb) && !seen[mask.index(nb)]) {
          seen[mask.index(nb)] = 1;
          next.push_back(nb);
        }
      }
    }
    layer = std::move(next);
  }
  throw std::logic_error("mask has no navigable cell");
}

Cell descend_step(const DistanceField& field, Cell cell) {
  // The scan runs in row-major order, so keeping only strict improvements
  // resolves value ties toward the smaller (row, col) neighbor.
  Cell best = cell;
  double best_value = field.at(cell);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell nb{cell.x + dx, cell.y + dy};
      if (!field.in_bounds(nb)) continue;
      if (field.at(nb) < best_value) {
        best = nb;
        best_value = field.at(nb);
      }
    }
  }
  return best;
}

}  // namespace echonav
