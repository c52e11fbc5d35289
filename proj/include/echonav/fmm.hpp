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

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "echonav/geometry.hpp"
#include "echonav/grid.hpp"

namespace echonav {

/// Which cells a geodesic may pass through. Built from ground truth (free
/// cells) or from an agent's map, where unknown cells count as navigable so
/// plans stay optimistic about unexplored space.
struct NavMask {
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  Vec2 origin;
  std::vector<uint8_t> navigable;

  static NavMask from_grid(const OccupancyGrid& g);
  static NavMask from_observed(const ObservedMap& m);

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width) + static_cast<size_t>(c.x);
  }
  bool is_navigable(Cell c) const { return navigable[index(c)] != 0; }
};

/// Geodesic distance in meters from the nearest source cell; unreachable
/// cells hold +infinity.
struct DistanceField {
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  Vec2 origin;
  std::vector<Cell> sources;
  std::vector<double> values;

  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width) + static_cast<size_t>(c.x);
  }
  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  double at(Cell c) const { return values[index(c)]; }
  bool finite_at(Cell c) const { return std::isfinite(at(c)); }
  Cell world_to_cell(Vec2 point) const;
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// First-order eikonal march over an 8-point upwind stencil: each cell takes
/// the minimum over the eight axis/diagonal simplexes, and a diagonal
/// participates only when both cells flanking its corner are navigable, so
/// the field never routes through a gap the motion model cannot take. The
/// stencil reproduces plane waves at any angle exactly, which keeps the
/// error against true geodesics to a few percent and makes a->b and b->a
/// solves agree to rounding noise. Deterministic: the march breaks value
/// ties by cell index. Non-navigable sources are ignored; if none remain,
/// throws std::invalid_argument ("no navigable source").
DistanceField fmm_solve(const NavMask& mask, const std::vector<Cell>& sources);
DistanceField fmm_solve(const NavMask& mask, Cell source);

/// Closest navigable cell by breadth-first layers that expand through
/// blocked cells as well; ties within a layer resolve row-major. Returns
/// `cell` itself when it is already navigable.
Cell nearest_navigable(const NavMask& mask, Cell cell);

/// The 8-neighbor with the smallest value when one sits strictly below the
/// current cell (row-major on ties); the cell itself when it is a local
/// minimum of the field.
Cell descend_step(const DistanceField& field, Cell cell);

}  // namespace echonav
