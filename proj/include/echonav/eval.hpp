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

#include <map>
#include <string>
#include <vector>

#include "echonav/agent.hpp"

namespace echonav {

struct EvalOptions {
  std::vector<Strategy> strategies;
  NavConfig nav;
  int workers = 1;
  bool navigation = true;  // run full episodes
  bool prediction = true;  // static field-prediction errors at episode starts
};

/// Static-sample prediction quality: bearing gap between the predicted and
/// the noise-free peak as seen from the field center ([0, pi]; an
/// uninformative center peak counts pi/2), plus the distance between the two
/// peak points in meters.
struct PredictionSample {
  int episode_id = 0;
  double angle_err = 0.0;
  double dist_err = 0.0;
};

/// Per-strategy means. Modes a strategy does not support hold NaN.
struct AggregateRow {
  std::string strategy;
  double sr, spl, soft_spl, angle_err, dist_err;
  int n = 0;
};

struct EvalReport {
  // Rows ordered by (strategy list order, episode input order).
  std::vector<std::pair<std::string, EpisodeResult>> results;
  std::vector<std::pair<std::string, PredictionSample>> predictions;
  std::vector<AggregateRow> aggregate;
};

/// Runs every requested strategy over every episode, splitting the work over
/// `workers` threads. Each (strategy, episode) task is self-contained and
/// lands in a preallocated slot, so the report is identical for any worker
/// count. Field-predicting strategies run both modes; the direction follower
/// only navigates, the random baseline only predicts.
EvalReport evaluate(const std::map<std::string, AcousticEnv>& envs,
                    const std::vector<Episode>& episodes, const NoiseModel& noise,
                    const BandErrorPrior& prior, const EvalOptions& options);

/// CSV `episode_id,strategy,S,l,p,steps,spl,soft_spl,status`.
std::string results_csv(const EvalReport& report);

/// CSV `strategy,sr,spl,soft_spl,angle_err,dist_err,n`.
std::string aggregate_csv(const EvalReport& report);

}  // namespace echonav
