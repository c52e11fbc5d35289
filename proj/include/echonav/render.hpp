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

#include <optional>
#include <string>
#include <vector>

#include "echonav/acoustics.hpp"
#include "echonav/grid.hpp"

namespace echonav {

/// A parsed step log: the pose sequence plus the last long-term goal that
/// was active when the log ended.
struct TrajectoryTrace {
  std::vector<Pose> poses;
  std::optional<Vec2> goal;
};

/// Parses the JSONL emitted by run_episode's trajectory log. Throws
/// std::invalid_argument on any malformed line.
TrajectoryTrace trajectory_from_jsonl(const std::string& text);

/// ASCII picture of the map with the trace overlaid: visited cells 'o',
/// start 'S', final pose 'E', long-term goal 'G'. Markers drawn in that
/// order, so S/E/G stay visible where they overlap the path. An empty trace
/// renders the bare map.
std::string render_trajectory(const OccupancyGrid& grid,
                              const TrajectoryTrace& trace);

/// Plain-text PGM (P2) heatmap, north row first. Pixels are
/// round(255 * value / max); a field with no positive value is all black.
std::string field_to_pgm(const AcousticField& field);

}  // namespace echonav
