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

#include "echonav/mapgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "echonav/rng.hpp"

namespace echonav {
namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive free interior

  int wspan() const { return x1 - x0 + 1; }
  int hspan() const { return y1 - y0 + 1; }
};

// A leaf splits when one more wall still leaves min_room cells on each side.
bool splittable(const Rect& r, int min_room) {
  return r.wspan() >= 2 * min_room + 1 || r.hspan() >= 2 * min_room + 1;
}

}  // namespace

OccupancyGrid generate_map(const MapGenParams& p) {
  if (p.rooms < 1) throw std::invalid_argument("rooms must be >= 1");
  if (p.door_cells < 1) throw std::invalid_argument("door width must be >= 1 cell");
  if (p.min_room < 1) throw std::invalid_argument("min room extent must be >= 1 cell");
  if (!(p.resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (p.width < p.min_room + 2 || p.height < p.min_room + 2) {
    throw std::invalid_argument("map too small for one room");
  }

  Rng rng(p.seed);
  std::vector<Rect> leaves{{1, 1, p.width - 2, p.height - 2}};
  while (static_cast<int>(leaves.size()) < p.rooms) {
    int pick = -1;
    long best_area = -1;
    for (size_t i = 0; i < leaves.size(); ++i) {
      if (!splittable(leaves[i], p.min_room)) continue;
      const long area = static_cast<long>(leaves[i].wspan()) * leaves[i].hspan();
      if (area > best_area) {
        best_area = area;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) {
      throw std::invalid_argument("cannot fit " + std::to_string(p.rooms) +
                                  " rooms into " + std::to_string(p.width) + "x" +
                                  std::to_string(p.height) + " cells");
    }
    const Rect leaf = leaves[static_cast<size_t>(pick)];
    const bool can_x = leaf.wspan() >= 2 * p.min_room + 1;
    const bool can_y = leaf.hspan() >= 2 * p.min_room + 1;
    const bool split_x = can_x && can_y ? leaf.wspan() >= leaf.hspan() : can_x;
    if (split_x) {
      const int s = leaf.x0 + p.min_room +
                    static_cast<int>(rng.next_below(
                        static_cast<uint64_t>(leaf.wspan() - 2 * p.min_room)));
      leaves[static_cast<size_t>(pick)] = {leaf.x0, leaf.y0, s - 1, leaf.y1};
      leaves.push_back({s + 1, leaf.y0, leaf.x1, leaf.y1});
    } else {
      const int s = leaf.y0 + p.min_room +
                    static_cast<int>(rng.next_below(
                        static_cast<uint64_t>(leaf.hspan() - 2 * p.min_room)));
      leaves[static_cast<size_t>(pick)] = {leaf.x0, leaf.y0, leaf.x1, s - 1};
      leaves.push_back({leaf.x0, s + 1, leaf.x1, leaf.y1});
    }
  }

  std::vector<uint8_t> occ(static_cast<size_t>(p.width) * p.height, 1);
  for (const Rect& leaf : leaves) {
    for (int y = leaf.y0; y <= leaf.y1; ++y) {
      for (int x = leaf.x0; x <= leaf.x1; ++x) {
        occ[static_cast<size_t>(y) * p.width + x] = 0;
      }
    }
  }

  // One door per shared wall. A door cell always has free leaf interior on
  // both sides, so it can never be walled off by a later split's wall (those
  // rows/columns are outside every interior overlap).
  for (size_t i = 0; i < leaves.size(); ++i) {
    for (size_t j = i + 1; j < leaves.size(); ++j) {
      const Rect& a = leaves[i];
      const Rect& b = leaves[j];
      if (a.x1 + 2 == b.x0 || b.x1 + 2 == a.x0) {  // vertical wall
        const int wall_x = a.x1 + 2 == b.x0 ? a.x1 + 1 : b.x1 + 1;
        const int lo = std::max(a.y0, b.y0);
        const int hi = std::min(a.y1, b.y1);
        if (lo > hi) continue;
        const int width = std::min(p.door_cells, hi - lo + 1);
        const int start =
            lo + static_cast<int>(rng.next_below(static_cast<uint64_t>(hi - lo + 2 - width)));
        for (int k = 0; k < width; ++k) {
          occ[static_cast<size_t>(start + k) * p.width + wall_x] = 0;
        }
      } else if (a.y1 + 2 == b.y0 || b.y1 + 2 == a.y0) {  // horizontal wall
        const int wall_y = a.y1 + 2 == b.y0 ? a.y1 + 1 : b.y1 + 1;
        const int lo = std::max(a.x0, b.x0);
        const int hi = std::min(a.x1, b.x1);
        if (lo > hi) continue;
        const int width = std::min(p.door_cells, hi - lo + 1);
        const int start =
            lo + static_cast<int>(rng.next_below(static_cast<uint64_t>(hi - lo + 2 - width)));
        for (int k = 0; k < width; ++k) {
          occ[static_cast<size_t>(wall_y) * p.width + (start + k)] = 0;
        }
      }
    }
  }

  OccupancyGrid grid(p.width, p.height, p.resolution, std::move(occ));

  // Doored splits keep one component; verify rather than assume.
  const auto free = grid.free_cells();
  std::vector<uint8_t> seen(static_cast<size_t>(p.width) * p.height, 0);
  std::vector<Cell> stack{free.front()};
  seen[grid.index(free.front())] = 1;
  size_t reached = 0;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    ++reached;
    const Cell around[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const Cell& n : around) {
      if (!grid.in_bounds(n) || grid.occupied(n) || seen[grid.index(n)]) continue;
      seen[grid.index(n)] = 1;
      stack.push_back(n);
    }
  }
  if (reached != free.size()) {
    throw std::logic_error("generated map is disconnected");
  }
  return grid;
}

}  // namespace echonav
