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

#include "echonav/episodes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "echonav/fmm.hpp"
#include "echonav/io.hpp"
#include "echonav/rng.hpp"
#include "json.hpp"

namespace echonav {
namespace {

constexpr int kMaxRejections = 10000;

void check_lengths(double shortest, double traveled) {
  if (!(shortest > 0.0) || !std::isfinite(shortest)) {
    throw std::invalid_argument("shortest path length must be positive and finite");
  }
  if (!(traveled >= 0.0)) {
    throw std::invalid_argument("traveled length must be nonnegative");
  }
}

}  // namespace

double spl(int success, double shortest, double traveled) {
  if (success != 0 && success != 1) {
    throw std::invalid_argument("success flag must be 0 or 1");
  }
  check_lengths(shortest, traveled);
  if (success == 0) return 0.0;
  return shortest / std::max(traveled, shortest);
}

double soft_spl(double shortest, double traveled) {
  check_lengths(shortest, traveled);
  return shortest / std::max(traveled, shortest);
}

std::vector<BandSpectrum> default_spectrum_library(int bands) {
  if (bands < 1) throw std::invalid_argument("need at least one band");
  std::vector<BandSpectrum> lib;
  lib.push_back(BandSpectrum{std::vector<double>(static_cast<size_t>(bands), 1.0)});
  for (int b = 0; b < bands; ++b) {
    BandSpectrum tone{std::vector<double>(static_cast<size_t>(bands), 0.0)};
    tone.energies[static_cast<size_t>(b)] = 1.0;
    lib.push_back(std::move(tone));
  }
  // Mid-heavy profile with a steep low cutoff and a gentler high rolloff.
  BandSpectrum phone{std::vector<double>(static_cast<size_t>(bands), 0.0)};
  const int c = bands / 2;
  for (int b = 0; b < bands; ++b) {
    const double v = b <= c ? std::pow(4.0, b - c) : std::pow(2.0, c - b);
    phone.energies[static_cast<size_t>(b)] = std::max(v, 0.05);
  }
  lib.push_back(std::move(phone));
  return lib;
}

std::vector<Episode> generate_episodes(const OccupancyGrid& grid, const std::string& scene,
                                       int count, uint64_t seed,
                                       const EpisodeConstraints& constraints,
                                       const std::vector<BandSpectrum>& library, int id_base) {
  if (count < 1) throw std::invalid_argument("episode count must be >= 1");
  if (!(constraints.min_geodesic >= 0.0) ||
      !(constraints.max_geodesic >= constraints.min_geodesic)) {
    throw std::invalid_argument("bad geodesic bounds");
  }
  const std::vector<BandSpectrum> lib =
      library.empty() ? default_spectrum_library(static_cast<int>(kDefaultAbsorption.size()))
                      : library;
  for (const BandSpectrum& s : lib) {
    if (!s.valid() || s.energies.size() != lib.front().energies.size()) {
      throw std::invalid_argument("library spectra must share one valid band count");
    }
  }

  const NavMask mask = NavMask::from_grid(grid);
  const std::vector<Cell> free = grid.free_cells();
  Rng rng(seed);
  std::vector<Episode> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    int rejections = 0;
    for (;;) {
      const Cell start_cell = free[rng.next_below(free.size())];
      const Cell goal_cell = free[rng.next_below(free.size())];
      const uint64_t heading_step = rng.next_below(24);
      const uint64_t spectrum_idx = rng.next_below(lib.size());
      const uint64_t episode_seed = rng.next_u64();
      bool ok = !(start_cell == goal_cell);
      if (ok) {
        const DistanceField d = fmm_solve(mask, goal_cell);
        const double geo = d.at(start_cell);
        ok = std::isfinite(geo) && geo >= constraints.min_geodesic &&
             geo <= constraints.max_geodesic;
      }
      if (ok) {
        Episode e;
        e.episode_id = id_base + i;
        e.scene = scene;
        const Vec2 s = grid.cell_center(start_cell);
        e.start = {s.x, s.y, static_cast<double>(heading_step) * kTurnIncrement};
        e.goal = grid.cell_center(goal_cell);
        e.spectrum = lib[spectrum_idx];
        e.seed = episode_seed;
        out.push_back(std::move(e));
        break;
      }
      if (++rejections >= kMaxRejections) {
        throw std::runtime_error("episode constraints unsatisfiable after 10000 rejections");
      }
    }
  }
  return out;
}

std::string episodes_to_jsonl(const std::vector<Episode>& episodes) {
  std::string out;
  for (const Episode& e : episodes) {
    nlohmann::ordered_json j;
    j["episode_id"] = e.episode_id;
    j["scene"] = e.scene;
    j["start"] = {e.start.x, e.start.y, e.start.heading * (180.0 / std::numbers::pi)};
    j["goal"] = {e.goal.x, e.goal.y};
    j["spectrum"] = e.spectrum.energies;
    j["seed"] = e.seed;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Episode> episodes_from_jsonl(const std::string& text) {
  std::vector<Episode> out;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    Episode e;
    e.episode_id = j.at("episode_id").get<int>();
    e.scene = j.at("scene").get<std::string>();
    const auto& start = j.at("start");
    if (!start.is_array() || start.size() != 3) {
      throw std::invalid_argument("episode start must be [x, y, heading_deg]");
    }
    double heading = start[2].get<double>() * (std::numbers::pi / 180.0);
    heading = std::fmod(heading, 2.0 * std::numbers::pi);
    if (heading < 0.0) heading += 2.0 * std::numbers::pi;
    e.start = {start[0].get<double>(), start[1].get<double>(), heading};
    const auto& goal = j.at("goal");
    if (!goal.is_array() || goal.size() != 2) {
      throw std::invalid_argument("episode goal must be [x, y]");
    }
    e.goal = {goal[0].get<double>(), goal[1].get<double>()};
    e.spectrum.energies = j.at("spectrum").get<std::vector<double>>();
    e.seed = j.at("seed").get<uint64_t>();
    out.push_back(std::move(e));
  }
  return out;
}

std::string curate_field_dataset(const AcousticEnv& env, const std::vector<Episode>& episodes,
                                 int size, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const OccupancyGrid& grid = env.grid();
  const NavMask mask = NavMask::from_grid(grid);

  std::string csv = "scene,src_x,src_y,rcv_x,rcv_y,band,";
  const int digits = static_cast<int>(std::to_string(size * size - 1).size());
  for (int i = 0; i < size * size; ++i) {
    char col[8];
    std::snprintf(col, sizeof col, "v%0*d", digits, i);
    csv += col;
    csv += i + 1 < size * size ? ',' : '\n';
  }

  for (const Episode& e : episodes) {
    const Cell goal_cell = grid.world_to_cell(e.goal);
    const Cell start_cell = grid.world_to_cell(e.start.position());
    const DistanceField dist = fmm_solve(mask, goal_cell);
    if (!dist.finite_at(start_cell)) {
      throw std::invalid_argument("episode goal unreachable from start");
    }

    std::vector<Vec2> receivers{e.start.position()};
    Cell c = start_cell;
    int walked = 0;
    const int limit = grid.width() * grid.height();
    while (!(c == goal_cell) && walked < limit) {
      const Cell next = descend_step(dist, c);
      if (next == c) break;  // local plateau; path cannot be extended
      c = next;
      if (++walked % stride == 0) receivers.push_back(grid.cell_center(c));
    }

    for (const Vec2& rcv : receivers) {
      for (int band = 0; band < env.band_count(); ++band) {
        AcousticField field = compute_field(env, e.goal, rcv, band, kFieldSize);
        if (size != kFieldSize) field = downsample_field(field, size);
        csv += e.scene;
        csv += ',';
        csv += format_double(e.goal.x);
        csv += ',';
        csv += format_double(e.goal.y);
        csv += ',';
        csv += format_double(rcv.x);
        csv += ',';
        csv += format_double(rcv.y);
        csv += ',';
        csv += std::to_string(band);
        for (const double v : field.values) {
          csv += ',';
          csv += format_double(v);
        }
        csv += '\n';
      }
    }
  }
  return csv;
}

}  // namespace echonav
