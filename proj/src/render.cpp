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

#include "echonav/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace echonav {

namespace {

void fail_line(size_t line_no, const std::string& why) {
  throw std::invalid_argument("trajectory log line " + std::to_string(line_no) +
                              ": " + why);
}

}  // namespace

TrajectoryTrace trajectory_from_jsonl(const std::string& text) {
  TrajectoryTrace trace;
  size_t line_no = 0;
  size_t begin = 0;
  while (begin < text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (line.empty()) continue;

    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(line_no, e.what());
    }
    if (!row.is_object() || !row.contains("pose")) {
      fail_line(line_no, "missing pose");
    }
    const auto& pose = row["pose"];
    if (!pose.is_array() || pose.size() != 3 || !pose[0].is_number() ||
        !pose[1].is_number() || !pose[2].is_number()) {
      fail_line(line_no, "pose must be [x, y, heading]");
    }
    trace.poses.push_back(Pose{pose[0].get<double>(), pose[1].get<double>(),
                               pose[2].get<double>()});
    if (row.contains("goal") && !row["goal"].is_null()) {
      const auto& goal = row["goal"];
      if (!goal.is_array() || goal.size() != 2 || !goal[0].is_number() ||
          !goal[1].is_number()) {
        fail_line(line_no, "goal must be null or [x, y]");
      }
      trace.goal = Vec2{goal[0].get<double>(), goal[1].get<double>()};
    }
  }
  return trace;
}

std::string render_trajectory(const OccupancyGrid& grid,
                              const TrajectoryTrace& trace) {
  std::vector<std::string> rows(static_cast<size_t>(grid.height()),
                                std::string(static_cast<size_t>(grid.width()), '.'));
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.occupied(Cell{x, y})) {
        rows[static_cast<size_t>(grid.height() - 1 - y)][static_cast<size_t>(x)] = '#';
      }
    }
  }

  const auto put = [&](Vec2 p, char glyph) {
    const auto cell = grid.try_world_to_cell(p);
    if (!cell) return;  // stale log against a different map: skip the marker
    rows[static_cast<size_t>(grid.height() - 1 - cell->y)][static_cast<size_t>(cell->x)] = glyph;
  };

  for (const Pose& pose : trace.poses) put(pose.position(), 'o');
  if (!trace.poses.empty()) {
    put(trace.poses.front().position(), 'S');
    put(trace.poses.back().position(), 'E');
  }
  if (trace.goal) put(*trace.goal, 'G');

  std::string out;
  out.reserve(rows.size() * (static_cast<size_t>(grid.width()) + 1));
  for (const std::string& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

std::string field_to_pgm(const AcousticField& field) {
  double max = 0.0;
  for (double v : field.values) max = std::max(max, v);

  char buf[32];
  std::snprintf(buf, sizeof(buf), "P2\n%d %d\n255\n", field.size, field.size);
  std::string out = buf;
  for (int row = field.size - 1; row >= 0; --row) {
    for (int col = 0; col < field.size; ++col) {
      const double v = std::max(field.at(row, col), 0.0);
      const int pixel = max > 0.0 ? static_cast<int>(std::lround(255.0 * v / max)) : 0;
      std::snprintf(buf, sizeof(buf), col == 0 ? "%d" : " %d", pixel);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace echonav
