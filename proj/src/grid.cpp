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

#include "echonav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "echonav/io.hpp"

namespace echonav {

namespace {

std::optional<Cell> nearest_cell(Vec2 p, Vec2 origin, double res, int w, int h) {
  const long cx = std::lround((p.x - origin.x) / res);
  const long cy = std::lround((p.y - origin.y) / res);
  if (cx < 0 || cx >= w || cy < 0 || cy >= h) return std::nullopt;
  return Cell{static_cast<int>(cx), static_cast<int>(cy)};
}

enum class WalkMode { kLine, kSupercover };

// Incremental lattice traversal. Visits the cell containing `start` at t = 0,
// then every cell the ray enters, with the parameter t at entry (same units
// as `dir`; t is meters when `dir` is unit length). Stops after t_max or when
// the visitor returns false. kLine steps diagonally through exact corner
// crossings; kSupercover also visits the two cells flanking the corner, which
// is what a collision check needs. The t sequence is a pure function of the
// inputs, so replaying a walk reproduces it bit for bit.
template <typename Visitor>
void walk_lattice(Vec2 grid_origin, double res, Vec2 start, Vec2 dir,
                  double t_max, WalkMode mode, Visitor&& visit) {
  const double inf = std::numeric_limits<double>::infinity();
  long cx = std::lround((start.x - grid_origin.x) / res);
  long cy = std::lround((start.y - grid_origin.y) / res);
  if (!visit(Cell{static_cast<int>(cx), static_cast<int>(cy)}, 0.0)) return;

  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);
  if (step_x == 0 && step_y == 0) return;

  auto boundary_t = [&](long c, double s, double d, int step, double go) {
    if (step == 0) return inf;
    const double edge = go + (static_cast<double>(c) + 0.5 * step) * res;
    return (edge - s) / d;
  };
  double tx = boundary_t(cx, start.x, dir.x, step_x, grid_origin.x);
  double ty = boundary_t(cy, start.y, dir.y, step_y, grid_origin.y);
  const double dtx = step_x ? res / std::abs(dir.x) : inf;
  const double dty = step_y ? res / std::abs(dir.y) : inf;

  for (;;) {
    if (tx < ty) {
      if (tx > t_max) return;
      cx += step_x;
      if (!visit(Cell{static_cast<int>(cx), static_cast<int>(cy)}, tx)) return;
      tx += dtx;
    } else if (ty < tx) {
      if (ty > t_max) return;
      cy += step_y;
      if (!visit(Cell{static_cast<int>(cx), static_cast<int>(cy)}, ty)) return;
      ty += dty;
    } else {
      // Exact corner crossing.
      const double t = tx;
      if (t > t_max) return;
      if (mode == WalkMode::kSupercover) {
        Cell side_a{static_cast<int>(cx + step_x), static_cast<int>(cy)};
        Cell side_b{static_cast<int>(cx), static_cast<int>(cy + step_y)};
        if (row_major_less(side_b, side_a)) std::swap(side_a, side_b);
        if (!visit(side_a, t)) return;
        if (!visit(side_b, t)) return;
      }
      cx += step_x;
      cy += step_y;
      if (!visit(Cell{static_cast<int>(cx), static_cast<int>(cy)}, t)) return;
      tx += dtx;
      ty += dty;
    }
  }
}

double ray_angle(const Pose& pose, double fov, int n_rays, int i) {
  if (n_rays == 1) return pose.heading;
  const double frac = static_cast<double>(i) / static_cast<double>(n_rays - 1);
  return pose.heading + fov * (frac - 0.5);
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             std::vector<uint8_t> cells, Vec2 origin)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      occupied_(std::move(cells)) {
  if (width_ < 3 || height_ < 3) throw std::invalid_argument("grid smaller than 3x3");
  if (!(resolution_ > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (occupied_.size() != static_cast<size_t>(width_) * static_cast<size_t>(height_)) {
    throw std::invalid_argument("occupancy size does not match dimensions");
  }
  for (int x = 0; x < width_; ++x) {
    if (!occupied(Cell{x, 0}) || !occupied(Cell{x, height_ - 1})) {
      throw std::invalid_argument("grid border must be occupied");
    }
  }
  for (int y = 0; y < height_; ++y) {
    if (!occupied(Cell{0, y}) || !occupied(Cell{width_ - 1, y})) {
      throw std::invalid_argument("grid border must be occupied");
    }
  }
  // Require one 4-connected free region of two or more cells.
  std::vector<uint8_t> seen(occupied_.size(), 0);
  bool ok = false;
  for (int y = 1; y < height_ - 1 && !ok; ++y) {
    for (int x = 1; x < width_ - 1 && !ok; ++x) {
      const Cell c{x, y};
      if (occupied(c) || seen[index(c)]) continue;
      size_t count = 0;
      std::vector<Cell> stack{c};
      seen[index(c)] = 1;
      while (!stack.empty()) {
        const Cell cur = stack.back();
        stack.pop_back();
        ++count;
        const Cell nbrs[4] = {{cur.x + 1, cur.y}, {cur.x - 1, cur.y},
                              {cur.x, cur.y + 1}, {cur.x, cur.y - 1}};
        for (const Cell n : nbrs) {
          if (in_bounds(n) && !occupied(n) && !seen[index(n)]) {
            seen[index(n)] = 1;
            stack.push_back(n);
          }
        }
      }
      if (count >= 2) ok = true;
    }
  }
  if (!ok) throw std::invalid_argument("grid has no free region of two or more cells");
}

Cell OccupancyGrid::world_to_cell(Vec2 point) const {
  const auto c = nearest_cell(point, origin_, resolution_, width_, height_);
  if (!c) {
    throw std::out_of_range("outside world: point (" + format_double(point.x) + ", " +
                            format_double(point.y) + ")");
  }
  return *c;
}

std::optional<Cell> OccupancyGrid::try_world_to_cell(Vec2 point) const {
  return nearest_cell(point, origin_, resolution_, width_, height_);
}

bool OccupancyGrid::point_free(Vec2 p) const {
  const auto c = try_world_to_cell(p);
  return c && is_free(*c);
}

bool OccupancyGrid::segment_free(Vec2 a, Vec2 b) const {
  bool free = true;
  walk_lattice(origin_, resolution_, a, b - a, 1.0, WalkMode::kSupercover,
               [&](Cell c, double) {
                 if (!in_bounds(c) || occupied(c)) {
                   free = false;
                   return false;
                 }
                 return true;
               });
  return free;
}

std::vector<Cell> OccupancyGrid::free_cells() const {
  std::vector<Cell> cells;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (is_free(Cell{x, y})) cells.push_back(Cell{x, y});
    }
  }
  return cells;
}

OccupancyGrid OccupancyGrid::from_ascii(std::string_view text) {
  const auto lines = split_lines(std::string(text));
  if (lines.empty() || !lines[0].starts_with("res ")) {
    throw std::invalid_argument("map must start with a 'res <meters>' line");
  }
  char* end = nullptr;
  const double res = std::strtod(lines[0].c_str() + 4, &end);
  if (end == lines[0].c_str() + 4) throw std::invalid_argument("unparseable resolution");

  std::vector<std::string> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    rows.push_back(lines[i]);
  }
  if (rows.empty()) throw std::invalid_argument("map has no rows");
  const int width = static_cast<int>(rows[0].size());
  const int height = static_cast<int>(rows.size());
  std::vector<uint8_t> occ(static_cast<size_t>(width) * height, 0);
  for (int r = 0; r < height; ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw std::invalid_argument("map rows have unequal width");
    }
    const int y = height - 1 - r;  // first row is the top of the world
    for (int x = 0; x < width; ++x) {
      const char ch = rows[r][static_cast<size_t>(x)];
      if (ch == '#') {
        occ[static_cast<size_t>(y) * width + x] = 1;
      } else if (ch != '.') {
        throw std::invalid_argument(std::string("bad map character '") + ch + "'");
      }
    }
  }
  return OccupancyGrid(width, height, res, std::move(occ));
}

OccupancyGrid OccupancyGrid::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("resolution") || !j.contains("rows")) {
    throw std::invalid_argument("map JSON needs 'resolution' and 'rows'");
  }
  std::string ascii = "res " + format_double(j.at("resolution").get<double>()) + "\n";
  for (const auto& row : j.at("rows")) ascii += row.get<std::string>() + "\n";
  return from_ascii(ascii);
}

OccupancyGrid OccupancyGrid::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") return from_json_text(text);
  return from_ascii(text);
}

std::string OccupancyGrid::to_ascii() const {
  std::string out = "res " + format_double(resolution_) + "\n";
  for (int y = height_ - 1; y >= 0; --y) {
    for (int x = 0; x < width_; ++x) out += occupied(Cell{x, y}) ? '#' : '.';
    out += '\n';
  }
  return out;
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::kMoveForward: return "MOVE_FORWARD";
    case Action::kTurnLeft: return "TURN_LEFT";
    case Action::kTurnRight: return "TURN_RIGHT";
    case Action::kStop: return "STOP";
  }
  return "?";
}

Pose apply_action(const OccupancyGrid& grid, const Pose& pose, Action action) {
  switch (action) {
    case Action::kStop:
      return pose;
    case Action::kTurnLeft:
      return {pose.x, pose.y, wrap_two_pi(pose.heading + kTurnIncrement)};
    case Action::kTurnRight:
      return {pose.x, pose.y, wrap_two_pi(pose.heading - kTurnIncrement)};
    case Action::kMoveForward: {
      const Vec2 target{pose.x + kForwardStep * std::cos(pose.heading),
                        pose.y + kForwardStep * std::sin(pose.heading)};
      if (!grid.segment_free(pose.position(), target)) return pose;  // blocked: no-op
      return {target.x, target.y, pose.heading};
    }
  }
  return pose;
}

DepthScan raycast_depth(const OccupancyGrid& grid, const Pose& pose, double fov,
                        int n_rays, double max_range) {
  if (n_rays < 1) throw std::invalid_argument("need at least one ray");
  if (!grid.point_free(pose.position())) {
    throw std::invalid_argument("pose is not on a free cell");
  }
  DepthScan scan;
  scan.fov = fov;
  scan.max_range = max_range;
  scan.distances.resize(static_cast<size_t>(n_rays));
  for (int i = 0; i < n_rays; ++i) {
    const double a = ray_angle(pose, fov, n_rays, i);
    const Vec2 dir{std::cos(a), std::sin(a)};
    double depth = max_range;
    walk_lattice(grid.origin(), grid.resolution(), pose.position(), dir, max_range,
                 WalkMode::kLine, [&](Cell c, double t) {
                   if (!grid.in_bounds(c) || grid.occupied(c)) {
                     depth = std::min(t, max_range);
                     return false;
                   }
                   return true;
                 });
    scan.distances[static_cast<size_t>(i)] = depth;
  }
  return scan;
}

ObservedMap::ObservedMap(const OccupancyGrid& world, Cell start)
    : width_(world.width()),
      height_(world.height()),
      resolution_(world.resolution()),
      origin_(world.origin()),
      states_(static_cast<size_t>(world.width()) * world.height(), CellState::kUnknown) {
  if (!in_bounds(start)) throw std::invalid_argument("start cell out of bounds");
  mark_free(start);
}

Cell ObservedMap::world_to_cell(Vec2 point) const {
  const auto c = nearest_cell(point, origin_, resolution_, width_, height_);
  if (!c) {
    throw std::out_of_range("outside world: point (" + format_double(point.x) + ", " +
                            format_double(point.y) + ")");
  }
  return *c;
}

void ObservedMap::mark_free(Cell c) {
  CellState& s = states_[index(c)];
  if (s == CellState::kOccupied) {
    throw std::logic_error("observation contradicts map: cell (" + std::to_string(c.x) +
                           ", " + std::to_string(c.y) + ") was occupied, now free");
  }
  if (s == CellState::kUnknown) {
    s = CellState::kFree;
    ++known_;
  }
}

void ObservedMap::mark_occupied(Cell c) {
  CellState& s = states_[index(c)];
  if (s == CellState::kFree) {
    throw std::logic_error("observation contradicts map: cell (" + std::to_string(c.x) +
                           ", " + std::to_string(c.y) + ") was free, now occupied");
  }
  if (s == CellState::kUnknown) {
    s = CellState::kOccupied;
    ++known_;
  }
}

void integrate_observation(ObservedMap& map, const Pose& pose, const DepthScan& scan) {
  const int n = scan.ray_count();
  for (int i = 0; i < n; ++i) {
    const double a = ray_angle(pose, scan.fov, n, i);
    const Vec2 dir{std::cos(a), std::sin(a)};
    const double depth = scan.distances[static_cast<size_t>(i)];
    const bool capped = depth >= scan.max_range;
    // Replaying the scan geometry yields bit-identical entry parameters, so
    // the hit cell is recovered by exact comparison. When the pose sits
    // exactly on a cell edge two cells share the hit parameter; the ray
    // stopped on the last of them and traversed the ones before.
    std::optional<Cell> hit;
    walk_lattice(map.origin(), map.resolution(), pose.position(), dir, scan.max_range,
                 WalkMode::kLine, [&](Cell c, double t) {
                   if (!map.in_bounds(c)) return false;
                   if (t < depth) {
                     map.mark_free(c);
                     return true;
                   }
                   if (capped || t > depth) return false;
                   if (hit) map.mark_free(*hit);
                   hit = c;
                   return true;
                 });
    if (!capped && hit) map.mark_occupied(*hit);
  }
}

}  // namespace echonav
