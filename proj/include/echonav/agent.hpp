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
#include <numbers>
#include <optional>
#include <ostream>
#include <string_view>

#include "echonav/acoustics.hpp"
#include "echonav/afp.hpp"
#include "echonav/episodes.hpp"
#include "echonav/grid.hpp"

namespace echonav {

enum class NavStatus : uint8_t { kRunning, kStopped, kTimeout };

std::string_view nav_status_name(NavStatus s);

/// The world point the planner currently heads for, tagged with the field
/// peak value that earned it. Present only when peak_value > 0.
struct LongTermGoal {
  Vec2 point;
  double peak_value = 0.0;
};

/// Mutable per-episode navigation state: one owner, one writer.
struct NavState {
  Pose pose;
  ObservedMap observed;
  std::optional<LongTermGoal> long_term_goal;
  int steps_taken = 0;
  double path_length = 0.0;  // meters over executed forward moves
  NavStatus status = NavStatus::kRunning;
};

struct NavConfig {
  int max_steps = 500;
  double success_radius = 1.0;  // meters around the true goal
  double sensor_fov = std::numbers::pi / 2.0;
  int sensor_rays = 64;
  double sensor_range = 5.0;  // meters
  int field_size = kFieldSize;
  int stuck_limit = 20;  // identical poses in a row before the goal resamples
  std::ostream* trajectory_log = nullptr;  // JSON lines, one record per step
};

/// Adopts the field peak as the long-term goal when there is none, or when
/// the peak value strictly beats the current one. A goal landing on a cell
/// the observed map knows to be blocked (or off the map) snaps to the
/// nearest believed-navigable cell center. All-zero fields never set a goal.
void maybe_update_goal(NavState& state, const AcousticField& field);

/// True when the field peak sits exactly on the center cell. Meaningful only
/// once the agent has arrived at its long-term goal: the near-field clamp
/// guarantees the center dominates within one cell of the source.
bool should_stop(const AcousticField& field);

/// Local controller between planner waypoints: turn toward the goal until
/// the bearing error is within half a turn increment (boundary inclusive),
/// then move. An exactly opposite goal turns left.
Action act_toward(const Pose& pose, Vec2 short_term_goal);

/// Runs one full episode on a grid-backed environment: sense depth, grow the
/// observed map, predict the field for `strategy`, keep the best peak as the
/// long-term goal, march downhill on a distance field solved over the
/// believed-free map, and stop when the peak centers upon arrival. Returns
/// metrics with the geodesic shortest length from the ground-truth map.
///
/// The direction-follower baseline replaces peak goals with a point 2 m along
/// the center-to-peak bearing and instead stops automatically inside the
/// success radius. The random strategy has no navigation behavior and is
/// rejected (std::invalid_argument), as are episodes whose start or goal is
/// not on a free cell. An unreachable goal is not an input error: the agent
/// hears silence and times out.
EpisodeResult run_episode(const AcousticEnv& env, const Episode& episode, Strategy strategy,
                          const NoiseModel& noise, const BandErrorPrior& prior,
                          const NavConfig& config = {});

/// One baseline decision: aim 2.0 m from the agent along the center-to-peak
/// direction of `field` (keeping the previous goal when the peak is at the
/// center), then plan as usual and return the next action.
Action direction_follower_step(NavState& state, const AcousticField& field);

}  // namespace echonav
