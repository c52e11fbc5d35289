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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echonav/acoustics.hpp"
#include "echonav/geometry.hpp"

namespace echonav {

/// Per-band prediction error prior plus the selection exponents. The band
/// weight is (1/e_i)^alpha, so every e_i must be positive.
struct BandErrorPrior {
  std::vector<double> errors;  // meters
  double alpha = 5.0;
  double beta = 0.8;
};

std::string prior_to_json(const BandErrorPrior& prior);
BandErrorPrior prior_from_json(const std::string& text);

/// How a band was picked: prior weights p, energy weights q, their products
/// w, and the argmax (ties resolve to the lowest index).
struct WeightBreakdown {
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> w;
  int chosen = 0;
};

/// Emulates the sim2real gap: per band, field values gain a log-normal
/// factor exp(sigma*g) with g drawn per cell, then a constant floor epsilon.
/// Draws are counter-based on (seed, band, receiver, cell), so two
/// evaluations of the same sample always see the same noise.
struct NoiseModel {
  std::vector<double> sigma;    // >= 0, per band
  std::vector<double> epsilon;  // >= 0, per band
  uint64_t seed = 0;

  static NoiseModel zero(int bands, uint64_t seed = 0);
};

enum class Strategy : uint8_t {
  kOracle,
  kAllFreq,
  kBestFreq,
  kHighestEnergy,
  kFreqAdaptive,
  kRandom,
  kDirectionFollower,
};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
/// The strategies predict_field accepts. kRandom and kDirectionFollower are
/// evaluator-level baselines without a field model.
bool has_field_predictor(Strategy s);

/// Band selection: p_i = (1/e_i)^alpha, q_i = (r_i/max r)^beta, w = p*q,
/// chosen = argmax w. Throws std::runtime_error when every r_i is zero and
/// std::invalid_argument on malformed inputs.
WeightBreakdown band_weights(const BandErrorPrior& prior, const BandSpectrum& r);

/// The per-band noisy predictor: ground-truth field pushed through `noise`.
AcousticField observed_field(const AcousticEnv& env, Vec2 source, Vec2 receiver,
                             int band, const NoiseModel& noise,
                             int size = kFieldSize);

/// Field prediction under a strategy. ORACLE is the noise-free field on the
/// band with the most received energy; ALL_FREQ sums observed fields
/// weighted by relative received energy; BEST_FREQ trusts the lowest-error
/// band, HIGHEST_ENERGY the loudest, FREQ_ADAPTIVE the band_weights choice.
/// Throws std::runtime_error("no signal") when the receiver hears nothing.
AcousticField predict_field(Strategy strategy, const AcousticEnv& env,
                            Vec2 source, const BandSpectrum& spectrum,
                            Vec2 receiver, const NoiseModel& noise,
                            const BandErrorPrior& prior, int size = kFieldSize);

struct FieldPeak {
  Cell cell;  // x = column, y = row
  double value = 0.0;
};

/// Argmax cell of the field; ties resolve to the lowest (row, col).
FieldPeak field_peak(const AcousticField& field);

struct CalibrationSample {
  const AcousticEnv* env = nullptr;  // borrowed; must outlive the call
  Vec2 source;
  BandSpectrum spectrum;
  Vec2 receiver;
};

struct CalibrationReport {
  std::vector<double> mean_error;  // meters, per band
  std::vector<double> std_error;
  int n_samples = 0;
};

/// CSV with header band,mean_error_m,std_error_m,n_samples.
std::string calibration_report_csv(const CalibrationReport& report);

inline constexpr double kCalibrationFloor = 1e-3;  // meters

/// Measures each band's prediction error as the distance between the noisy
/// and noise-free field peaks, averaged over the samples (order-independent
/// reduction). Samples must carry a flat spectrum; anything else throws
/// std::runtime_error("calibration requires white-noise source"). Mean
/// errors are floored at `error_floor` so the resulting prior stays valid.
BandErrorPrior calibrate_band_errors(const std::vector<CalibrationSample>& eval_set,
                                     const NoiseModel& noise, double alpha = 5.0,
                                     double beta = 0.8,
                                     CalibrationReport* report = nullptr,
                                     double error_floor = kCalibrationFloor);

}  // namespace echonav
