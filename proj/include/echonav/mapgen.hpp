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

#include "echonav/grid.hpp"

namespace echonav {

struct MapGenParams {
  int width = 64;   // cells, including the outer wall
  int height = 64;
  double resolution = 0.5;  // meters per cell
  int rooms = 6;
  int door_cells = 2;  // door width along the wall
  int min_room = 4;    // smallest room interior extent, cells
  uint64_t seed = 0;
};

/// Procedural multi-room layout: binary-space splits carve the interior into
/// `rooms` rectangles and every shared wall gets one door, so all free cells
/// stay mutually reachable. Deterministic in `seed`. Throws
/// std::invalid_argument when the parameters cannot fit (too many rooms for
/// the extent, degenerate sizes).
OccupancyGrid generate_map(const MapGenParams& params);

}  // namespace echonav
