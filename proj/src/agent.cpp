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

#include "echonav/agent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "echonav/fmm.hpp"
#include "json.hpp"

namespace echonav {
namespace {

Cell clamp_to_lattice(const NavMask& mask, Vec2 point) {
  const int cx = static_cast<int>(std::lround((point.x - mask.origin.x) / mask.resolution));
  const int cy = static_cast<int>(std::lround((point.y - mask.origin.y) / mask.resolution));
  return {std::clamp(cx, 0, mask.width - 1), std::clamp(cy, 0, mask.height - 1)};
}

// Adopt `point` as the goal, diverting to the nearest believed-navigable
// cell center when its own cell is known-blocked or off the map.
void set_goal(NavState& state, Vec2 point, double peak_value) {
  const NavMask mask = NavMask::from_observed(state.observed);
  const Cell raw = clamp_to_lattice(mask, point);
  Vec2 goal = point;
  const bool inside = point.x > mask.origin.x - 0.5 * mask.resolution &&
                      point.y > mask.origin.y - 0.5 * mask.resolution &&
                      point.x < mask.origin.x + (mask.width - 0.5) * mask.resolution &&
                      point.y < mask.origin.y + (mask.height - 0.5) * mask.resolution;
  if (!inside || !mask.is_navigable(raw)) {
    const Cell snapped = nearest_navigable(mask, raw);
    goal = state.observed.cell_center(snapped);
  }
  state.long_term_goal = LongTermGoal{goal, peak_value};
}

bool arrived(Cell agent, Cell goal) {
  return std::abs(agent.x - goal.x) <= 1 && std::abs(agent.y - goal.y) <= 1;
}

struct Plan {
  std::optional<Vec2> waypoint;  // next short-term goal, absent if unplannable
  bool at_goal_cell = false;
};

// FMM over the believed-free map (unknown counts navigable), one downhill
// step from the agent cell.
Plan plan_step(const NavState& state, Vec2 goal) {
  const NavMask mask = NavMask::from_observed(state.observed);
  Cell goal_cell = clamp_to_lattice(mask, goal);
  if (!mask.is_navigable(goal_cell)) goal_cell = nearest_navigable(mask, goal_cell);
  const DistanceField dist = fmm_solve(mask, goal_cell);
  const Cell agent_cell = clamp_to_lattice(mask, state.pose.position());
  Plan plan;
  if (!dist.finite_at(agent_cell)) return plan;  // goal sealed off in the belief
  if (agent_cell == goal_cell) {
    plan.at_goal_cell = true;
    plan.waypoint = goal;
    return plan;
  }
  const Cell next = descend_step(dist, agent_cell);
  if (next == agent_cell) return plan;
  const int dx = next.x - agent_cell.x;
  const int dy = next.y - agent_cell.y;
  if (dx != 0 && dy != 0) {
    // A diagonal step sweeps both flanking cells; when the belief blocks
    // one, detour through the open flank rather than command an impossible
    // corner cut.
    const Cell fx{agent_cell.x + dx, agent_cell.y};
    const Cell fy{agent_cell.x, agent_cell.y + dy};
    const bool ok_x = mask.is_navigable(fx);
    const bool ok_y = mask.is_navigable(fy);
    if (!ok_x || !ok_y) {
      Cell via = agent_cell;
      if (ok_x && dist.finite_at(fx)) via = fx;
      if (ok_y && dist.finite_at(fy) && (via == agent_cell || dist.at(fy) < dist.at(via))) {
        via = fy;
      }
      if (via == agent_cell) return plan;  // boxed in: no sweepable move
      plan.waypoint = state.observed.cell_center(via);
      return plan;
    }
  }
  plan.waypoint = state.observed.cell_center(next);
  return plan;
}

void log_step(std::ostream* log, const NavState& state, Action action,
              const std::optional<FieldPeak>& peak) {
  if (log == nullptr) return;
  nlohmann::ordered_json j;
  j["step"] = state.steps_taken;
  j["pose"] = {state.pose.x, state.pose.y, state.pose.heading};
  j["action"] = action_name(action);
  if (state.long_term_goal) {
    j["goal"] = {state.long_term_goal->point.x, state.long_term_goal->point.y};
    j["peak_value"] = state.long_term_goal->peak_value;
  } else {
    j["goal"] = nullptr;
    j["peak_value"] = nullptr;
  }
  if (peak) {
    j["peak_cell"] = {peak->cell.x, peak->cell.y};
  } else {
    j["peak_cell"] = nullptr;
  }
  *log << j.dump() << '\n';
}

}  // namespace

std::string_view nav_status_name(NavStatus s) {
  switch (s) {
    case NavStatus::kRunning: return "RUNNING";
    case NavStatus::kStopped: return "STOPPED";
    case NavStatus::kTimeout: return "TIMEOUT";
  }
  throw std::invalid_argument("unknown status");
}

void maybe_update_goal(NavState& state, const AcousticField& field) {
  const FieldPeak peak = field_peak(field);
  if (!(peak.value > 0.0)) return;
  if (state.long_term_goal && !(peak.value > state.long_term_goal->peak_value)) return;
  set_goal(state, field.cell_world(peak.cell.y, peak.cell.x), peak.value);
}

bool should_stop(const AcousticField& field) {
  const FieldPeak peak = field_peak(field);
  const int center = field.size / 2;
  return peak.cell == Cell{center, center};
}

Action act_toward(const Pose& pose, Vec2 short_term_goal) {
  const Vec2 d = short_term_goal - pose.position();
  const double bearing = std::atan2(d.y, d.x);
  const double diff = wrap_pi(bearing - pose.heading);
  if (std::abs(diff) <= kTurnIncrement / 2.0) return Action::kMoveForward;
  return diff > 0.0 ? Action::kTurnLeft : Action::kTurnRight;
}

Action direction_follower_step(NavState& state, const AcousticField& field) {
  const FieldPeak peak = field_peak(field);
  const int center = field.size / 2;
  if (peak.value > 0.0 && !(peak.cell == Cell{center, center})) {
    const Vec2 dir = field.cell_world(peak.cell.y, peak.cell.x) - field.center;
    const double len = dir.norm();
    set_goal(state, state.pose.position() + dir * (2.0 / len), peak.value);
  }
  if (!state.long_term_goal) return Action::kTurnLeft;
  const Plan plan = plan_step(state, state.long_term_goal->point);
  if (!plan.waypoint || plan.at_goal_cell) return Action::kTurnLeft;
  return act_toward(state.pose, *plan.waypoint);
}

EpisodeResult run_episode(const AcousticEnv& env, const Episode& episode, Strategy strategy,
                          const NoiseModel& noise, const BandErrorPrior& prior,
                          const NavConfig& config) {
  if (strategy == Strategy::kRandom) {
    throw std::invalid_argument("the random baseline only predicts, it does not navigate");
  }
  const OccupancyGrid& grid = env.grid();
  if (!grid.point_free(episode.start.position())) {
    throw std::invalid_argument("episode start is not on a free cell");
  }
  if (!grid.point_free(episode.goal)) {
    throw std::invalid_argument("episode goal is not on a free cell");
  }

  const bool follower = strategy == Strategy::kDirectionFollower;
  // The follower reads raw audio, so it sees the loudest observed band.
  const Strategy predictor = follower ? Strategy::kHighestEnergy : strategy;

  const Cell start_cell = grid.world_to_cell(episode.start.position());
  const Cell true_goal_cell = grid.world_to_cell(episode.goal);
  const DistanceField truth = fmm_solve(NavMask::from_grid(grid), true_goal_cell);
  const double shortest = truth.at(start_cell);

  NavState state{episode.start, ObservedMap(grid, start_cell), std::nullopt, 0, 0.0,
                 NavStatus::kRunning};
  Pose last_pose = state.pose;
  int still = 0;

  while (state.steps_taken < config.max_steps) {
    const DepthScan scan = raycast_depth(grid, state.pose, config.sensor_fov,
                                         config.sensor_rays, config.sensor_range);
    integrate_observation(state.observed, state.pose, scan);

    std::optional<AcousticField> field;
    try {
      field = predict_field(predictor, env, episode.goal, episode.spectrum,
                            state.pose.position(), noise, prior, config.field_size);
    } catch (const std::runtime_error&) {
      // Silence: nothing reaches the agent here, keep whatever goal exists.
    }
    std::optional<FieldPeak> peak;
    if (field) peak = field_peak(*field);

    Action action = Action::kTurnLeft;  // scan in place when plans fall through
    if (follower) {
      if (distance(state.pose.position(), episode.goal) <= config.success_radius) {
        state.status = NavStatus::kStopped;
        action = Action::kStop;
      } else if (field) {
        action = direction_follower_step(state, *field);
      } else if (state.long_term_goal) {
        const Plan plan = plan_step(state, state.long_term_goal->point);
        if (plan.waypoint && !plan.at_goal_cell) action = act_toward(state.pose, *plan.waypoint);
      }
    } else {
      if (field) maybe_update_goal(state, *field);
      if (state.long_term_goal) {
        const Cell agent_cell = grid.world_to_cell(state.pose.position());
        const NavMask belief = NavMask::from_observed(state.observed);
        const Cell goal_cell = clamp_to_lattice(belief, state.long_term_goal->point);
        if (arrived(agent_cell, goal_cell)) {
          if (field && should_stop(*field)) {
            state.status = NavStatus::kStopped;
            action = Action::kStop;
          } else {
            // Arrived but the source is elsewhere: sample a fresh goal.
            state.long_term_goal.reset();
            if (field) maybe_update_goal(state, *field);
          }
        }
      }
      if (state.status == NavStatus::kRunning && state.long_term_goal) {
        const Plan plan = plan_step(state, state.long_term_goal->point);
        if (plan.waypoint && !plan.at_goal_cell) {
          action = act_toward(state.pose, *plan.waypoint);
        } else if (!plan.waypoint) {
          state.long_term_goal.reset();  // belief says unreachable; resample
        }
      }
    }

    if (action != Action::kStop) {
      const Pose next = apply_action(grid, state.pose, action);
      if (action == Action::kMoveForward && !(next.position() == state.pose.position())) {
        state.path_length += kForwardStep;
      }
      state.pose = next;
    }
    ++state.steps_taken;
    log_step(config.trajectory_log, state, action, peak);
    if (state.status == NavStatus::kStopped) break;

    if (state.pose == last_pose) {
      if (++still >= config.stuck_limit) {
        state.long_term_goal.reset();
        still = 0;
      }
    } else {
      still = 0;
      last_pose = state.pose;
    }
  }
  if (state.status == NavStatus::kRunning) state.status = NavStatus::kTimeout;

  EpisodeResult r;
  r.episode_id = episode.episode_id;
  r.status = std::string(nav_status_name(state.status));
  r.steps = state.steps_taken;
  r.traveled = state.path_length;
  r.shortest = shortest;
  r.success = state.status == NavStatus::kStopped &&
                      distance(state.pose.position(), episode.goal) <= config.success_radius
                  ? 1
                  : 0;
  if (std::isfinite(shortest) && shortest > 0.0) {
    r.spl = spl(r.success, shortest, r.traveled);
    r.soft_spl = soft_spl(shortest, r.traveled);
  } else {
    r.spl = 0.0;  // degenerate episodes carry no path to compare against
    r.soft_spl = 0.0;
  }
  return r;
}

}  // namespace echonav
