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
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echonav/geometry.hpp"

namespace echonav {

/// Closed 2D occupancy world. Immutable after construction and safe to share
/// across threads. Cell (0,0) is the south-west corner; its center sits at
/// `origin`. A point belongs to the cell whose center is nearest, halves
/// rounding away from zero.
class OccupancyGrid {
 public:
  /// `cells` holds occupancy flags, row-major, y*width + x. Throws
  /// std::invalid_argument if the grid is smaller than 3x3, the border is not
  /// fully occupied, or there is no connected free region of two or more cells.
  OccupancyGrid(int width, int height, double resolution,
                std::vector<uint8_t> cells, Vec2 origin = {0.0, 0.0});

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  bool occupied(Cell c) const { return occupied_[index(c)] != 0; }
  bool is_free(Cell c) const { return !occupied(c); }
  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width_) + static_cast<size_t>(c.x);
  }

  /// Nearest-center cell for a world point. Throws std::out_of_range
  /// ("outside world") if the point rounds off the lattice; the exact outer
  /// boundary counts as outside.
  Cell world_to_cell(Vec2 point) const;
  std::optional<Cell> try_world_to_cell(Vec2 point) const;
  Vec2 cell_center(Cell c) const {
    return {origin_.x + c.x * resolution_, origin_.y + c.y * resolution_};
  }

  /// True if the point lies on a free in-bounds cell.
  bool point_free(Vec2 p) const;

  /// True if every cell touched by the segment is free. Exact corner
  /// crossings are conservative: both adjacent cells must be free.
  bool segment_free(Vec2 a, Vec2 b) const;

  std::vector<Cell> free_cells() const;

  /// ASCII format: `res <meters>` then height rows of width chars, `#`
  /// occupied and `.` free, top (max-y) row first.
  static OccupancyGrid from_ascii(std::string_view text);
  /// JSON format: { "resolution": f, "rows": ["##..", ...] }, same row order.
  static OccupancyGrid from_json_text(const std::string& text);
  /// Dispatches on extension: `.json` -> JSON, anything else ASCII.
  static OccupancyGrid load(const std::filesystem::path& path);
  std::string to_ascii() const;

 private:
  int width_;
  int height_;
  double resolution_;
  Vec2 origin_;
  std::vector<uint8_t> occupied_;
};

/// Agent pose; heading is radians in [0, 2*pi), 0 pointing along +x,
/// increasing counterclockwise.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

enum class Action : uint8_t { kMoveForward, kTurnLeft, kTurnRight, kStop };

std::string_view action_name(Action a);

inline constexpr double kTurnIncrement = std::numbers::pi / 12.0;  // 15 degrees
inline constexpr double kForwardStep = 0.25;                       // meters

/// Discrete kinematics. Turns rotate exactly 15 degrees; MOVE_FORWARD
/// translates 0.25 m along the heading when the whole swept segment stays on
/// free cells, and is a silent no-op otherwise (no sliding).
Pose apply_action(const OccupancyGrid& grid, const Pose& pose, Action action);

/// One depth sweep. Ray i leaves at heading + fov*(i/(n-1) - 1/2); a single
/// ray points straight ahead. Distances are to the boundary of the first
/// occupied cell, capped at max_range.
struct DepthScan {
  double fov = 0.0;
  double max_range = 0.0;
  std::vector<double> distances;

  int ray_count() const { return static_cast<int>(distances.size()); }
};

DepthScan raycast_depth(const OccupancyGrid& grid, const Pose& pose, double fov,
                        int n_rays, double max_range);

enum class CellState : uint8_t { kUnknown, kFree, kOccupied };

/// The map the agent builds online. Same lattice as the world it observes;
/// all cells start unknown except the start cell.
class ObservedMap {
 public:
  ObservedMap(const OccupancyGrid& world, Cell start);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  CellState state(Cell c) const { return states_[index(c)]; }
  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width_) + static_cast<size_t>(c.x);
  }
  Cell world_to_cell(Vec2 point) const;
  Vec2 cell_center(Cell c) const {
    return {origin_.x + c.x * resolution_, origin_.y + c.y * resolution_};
  }

  /// Known cells never revert; contradicting an earlier observation throws
  /// std::logic_error (sensing is noiseless, so it indicates a bug).
  void mark_free(Cell c);
  void mark_occupied(Cell c);

  int known_count() const { return known_; }

 private:
  int width_;
  int height_;
  double resolution_;
  Vec2 origin_;
  std::vector<CellState> states_;
  int known_ = 0;
};

/// Replays the scan geometry and marks every cell the rays traversed free and
/// each hit cell occupied. Cells past an uncapped ray end stay unknown.
void integrate_observation(ObservedMap& map, const Pose& pose, const DepthScan& scan);

}  // namespace echonav
