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
#include <string>
#include <vector>

#include "echonav/acoustics.hpp"
#include "echonav/grid.hpp"

namespace echonav {

/// One navigation trial: where the agent starts, where the sound source sits,
/// and what it emits. `seed` drives everything stochastic downstream.
struct Episode {
  int episode_id = 0;
  std::string scene;  // map name the start/goal coordinates refer to
  Pose start;
  Vec2 goal;
  BandSpectrum spectrum;
  uint64_t seed = 0;
};

/// Per-episode outcome. `shortest` is the geodesic start->goal distance on
/// the ground-truth map; `traveled` accumulates executed forward steps.
struct EpisodeResult {
  int episode_id = 0;
  int success = 0;
  double shortest = 0.0;
  double traveled = 0.0;
  int steps = 0;
  std::string status;  // "STOPPED" or "TIMEOUT"
  double spl = 0.0;
  double soft_spl = 0.0;
};

/// Success weighted by inverse path length: S * l / max(p, l).
/// Throws std::invalid_argument when shortest <= 0 or traveled < 0.
double spl(int success, double shortest, double traveled);

/// spl with the success flag forced to 1: l / max(p, l).
double soft_spl(double shortest, double traveled);

struct EpisodeConstraints {
  double min_geodesic = 1.5;   // meters
  double max_geodesic = 30.0;  // meters
};

/// Source spectra sampled during generation: flat white noise, one single-band
/// tone per band, and a mid-heavy telephone-like profile.
std::vector<BandSpectrum> default_spectrum_library(int bands);

/// Uniformly samples start/goal cell centers (heading a multiple of the turn
/// increment) and keeps pairs whose geodesic distance fits the constraints.
/// Deterministic in `seed`; ids count up from `id_base`. Throws
/// std::runtime_error after 10,000 consecutive rejections and
/// std::invalid_argument on empty library or nonpositive count.
std::vector<Episode> generate_episodes(const OccupancyGrid& grid, const std::string& scene,
                                       int count, uint64_t seed,
                                       const EpisodeConstraints& constraints = {},
                                       const std::vector<BandSpectrum>& library = {},
                                       int id_base = 0);

/// JSON-lines codec. One object per line:
/// {"episode_id","scene","start":[x,y,heading_deg],"goal":[x,y],"spectrum":[...],"seed"}
std::string episodes_to_jsonl(const std::vector<Episode>& episodes);
std::vector<Episode> episodes_from_jsonl(const std::string& text);

/// Noise-free per-band fields along each episode's shortest path, in the
/// dataset CSV layout `scene,src_x,src_y,rcv_x,rcv_y,band,v...` (row-major
/// values, one row per receiver/band). Receivers are the start position plus
/// every `stride`-th cell of the descent path to the goal. `size` below the
/// native field edge selects center-preserving downsampling.
std::string curate_field_dataset(const AcousticEnv& env, const std::vector<Episode>& episodes,
                                 int size = kFieldSize, int stride = 4);

}  // namespace echonav
