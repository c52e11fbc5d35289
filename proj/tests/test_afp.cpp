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

#include "echonav/afp.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "echonav/acoustics.hpp"
#include "echonav/grid.hpp"
#include "echonav/rng.hpp"

namespace echonav {
namespace {

OccupancyGrid open_room(int w, int h) {
  std::vector<uint8_t> occ(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
        occ[static_cast<size_t>(y) * w + x] = 1;
      }
    }
  }
  return OccupancyGrid(w, h, 0.5, std::move(occ));
}

BandErrorPrior uniform_prior(int bands, double alpha = 5.0, double beta = 0.8) {
  BandErrorPrior prior;
  prior.errors.assign(static_cast<size_t>(bands), 1.0);
  prior.alpha = alpha;
  prior.beta = beta;
  return prior;
}

TEST_CASE("band selection matches hand-evaluated weights") {
  SUBCASE("uniform prior follows the energy") {
    const auto w = band_weights({{1, 1, 1, 1, 1}, 5.0, 0.8}, {{1, 2, 4, 2, 1}});
    CHECK(w.chosen == 2);
    for (double p : w.p) CHECK(p == 1.0);
    CHECK(w.q[2] == 1.0);
  }
  SUBCASE("uniform energy follows the prior") {
    const auto w = band_weights({{3, 2, 1, 2, 3}, 5.0, 0.8}, {{2, 2, 2, 2, 2}});
    CHECK(w.chosen == 2);
    for (double q : w.q) CHECK(q == 1.0);
  }
  SUBCASE("two-band worked example") {
    const auto w = band_weights({{0.5, 1.0}, 1.0, 1.0}, {{1.0, 4.0}});
    CHECK(w.p[0] == 2.0);
    CHECK(w.p[1] == 1.0);
    CHECK(w.q[0] == 0.25);
    CHECK(w.q[1] == 1.0);
    CHECK(w.w[0] == 0.5);
    CHECK(w.w[1] == 1.0);
    CHECK(w.chosen == 1);
  }
  SUBCASE("ties resolve to the lowest band") {
    const auto w = band_weights({{1, 1}, 2.0, 0.5}, {{3.0, 3.0}});
    CHECK(w.chosen == 0);
  }
  SUBCASE("silence and malformed inputs are rejected") {
    CHECK_THROWS_AS(band_weights({{1, 1}, 5.0, 0.8}, {{0.0, 0.0}}), std::runtime_error);
    CHECK_THROWS_AS(band_weights({{1, 0.0}, 5.0, 0.8}, {{1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(band_weights({{1, 1, 1}, 5.0, 0.8}, {{1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(band_weights({{1, 1}, -5.0, 0.8}, {{1.0, 1.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("band selection properties hold over random draws") {
  Rng rng(0xBA4D5ULL);
  const int kBands = 5;
  for (int trial = 0; trial < 1000; ++trial) {
    BandErrorPrior prior;
    for (int i = 0; i < kBands; ++i) {
      prior.errors.push_back(rng.next_uniform(0.05, 2.0));
    }
    prior.alpha = rng.next_uniform(0.5, 6.0);
    prior.beta = rng.next_uniform(0.1, 2.0);
    BandSpectrum r;
    for (int i = 0; i < kBands; ++i) {
      r.energies.push_back(rng.next_double() < 0.2 ? 0.0
                                                   : rng.next_uniform(0.01, 5.0));
    }
    if (!r.valid()) r.energies[0] = 1.0;

    const auto base = band_weights(prior, r);

    // Scaling every energy by the same factor cannot change the choice.
    for (double scale : {1e-3, 37.5, 1e3}) {
      BandSpectrum scaled = r;
      for (double& e : scaled.energies) e *= scale;
      CHECK(band_weights(prior, scaled).chosen == base.chosen);
    }

    // Lowering one band's error can only pull the choice toward that band.
    const int j = rng.next_int(0, kBands - 1);
    BandErrorPrior better = prior;
    better.errors[static_cast<size_t>(j)] *= 0.5;
    const int moved = band_weights(better, r).chosen;
    CHECK((moved == j || moved == base.chosen));

    // Vanishing alpha leaves pure energy; vanishing beta pure prior.
    BandErrorPrior no_prior = prior;
    no_prior.alpha = 1e-9;
    int loudest = 0;
    for (int i = 1; i < kBands; ++i) {
      if (r.energies[static_cast<size_t>(i)] > r.energies[static_cast<size_t>(loudest)]) {
        loudest = i;
      }
    }
    CHECK(band_weights(no_prior, r).chosen == loudest);

    BandSpectrum all_on;
    for (int i = 0; i < kBands; ++i) all_on.energies.push_back(rng.next_uniform(0.1, 5.0));
    BandErrorPrior no_energy = prior;
    no_energy.beta = 1e-9;
    int most_trusted = 0;
    for (int i = 1; i < kBands; ++i) {
      if (prior.errors[static_cast<size_t>(i)] < prior.errors[static_cast<size_t>(most_trusted)]) {
        most_trusted = i;
      }
    }
    CHECK(band_weights(no_energy, all_on).chosen == most_trusted);
  }
}

TEST_CASE("priors survive a JSON round trip") {
  const BandErrorPrior prior{{0.86, 0.41, 0.22, 0.13, 0.35}, 5.0, 0.8};
  const auto text = prior_to_json(prior);
  const auto back = prior_from_json(text);
  CHECK(back.errors == prior.errors);
  CHECK(back.alpha == prior.alpha);
  CHECK(back.beta == prior.beta);
  CHECK(prior_to_json(back) == text);

  CHECK_THROWS_AS(prior_from_json("{\"alpha\": 5.0}"), std::invalid_argument);
  CHECK_THROWS_AS(prior_from_json("{\"e\": [0.0], \"alpha\": 5.0, \"beta\": 0.8}"),
                  std::invalid_argument);
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::kOracle, Strategy::kAllFreq, Strategy::kBestFreq,
                     Strategy::kHighestEnergy, Strategy::kFreqAdaptive,
                     Strategy::kRandom, Strategy::kDirectionFollower}) {
    const auto parsed = parse_strategy(strategy_name(s));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == s);
  }
  CHECK_FALSE(parse_strategy("loudness").has_value());
  CHECK(has_field_predictor(Strategy::kOracle));
  CHECK_FALSE(has_field_predictor(Strategy::kRandom));
  CHECK_FALSE(has_field_predictor(Strategy::kDirectionFollower));
}

TEST_CASE("field peaks break ties toward the lowest row and column") {
  AcousticField field;
  field.size = 3;
  field.values.assign(9, 0.0);
  SUBCASE("an all-zero field peaks at the origin cell") {
    const auto peak = field_peak(field);
    CHECK(peak.cell == Cell{0, 0});
    CHECK(peak.value == 0.0);
  }
  SUBCASE("a single hot cell wins") {
    field.values[5] = 2.0;  // row 1, col 2
    const auto peak = field_peak(field);
    CHECK(peak.cell == Cell{2, 1});
    CHECK(peak.value == 2.0);
  }
  SUBCASE("equal maxima resolve by row then column") {
    field.values[5] = 2.0;  // row 1, col 2
    field.values[6] = 2.0;  // row 2, col 0
    CHECK(field_peak(field).cell == Cell{2, 1});
  }
}

TEST_CASE("noise is a pure function of seed, band, receiver and cell") {
  const auto g = open_room(16, 16);
  auto env = AcousticEnv::grid_world(g);
  const Vec2 src{5.0, 5.0};
  const Vec2 rcv{2.75, 2.75};

  NoiseModel noise = NoiseModel::zero(5, 42);
  noise.sigma.assign(5, 0.4);
  noise.epsilon.assign(5, 0.02);

  const auto a = observed_field(env, src, rcv, 2, noise);
  const auto b = observed_field(env, src, rcv, 2, noise);
  CHECK(a.values == b.values);

  NoiseModel other = noise;
  other.seed = 43;
  const auto c = observed_field(env, src, rcv, 2, other);
  CHECK(a.values != c.values);

  // Zero noise is the identity, bit for bit.
  const auto truth = compute_field(env, src, rcv, 2);
  const auto clean = observed_field(env, src, rcv, 2, NoiseModel::zero(5, 42));
  CHECK(clean.values == truth.values);

  // The additive floor alone shifts every cell by the same constant.
  NoiseModel floor_only = NoiseModel::zero(5, 7);
  floor_only.epsilon.assign(5, 0.5);
  const auto floored = observed_field(env, src, rcv, 2, floor_only);
  for (size_t i = 0; i < truth.values.size(); ++i) {
    CHECK(floored.values[i] == truth.values[i] + 0.5);
  }
}

TEST_CASE("with zero noise every strategy agrees with the oracle peak") {
  const auto g = open_room(20, 20);
  auto env = AcousticEnv::grid_world(g);
  const Vec2 src{7.0, 5.0};
  const Vec2 rcv{4.75, 4.75};
  const BandSpectrum spectrum{{1.0, 1.0, 1.0, 1.0, 1.0}};
  const auto noise = NoiseModel::zero(5, 0);
  const BandErrorPrior prior{{0.5, 0.4, 0.3, 0.2, 0.1}, 5.0, 0.8};

  const auto oracle =
      predict_field(Strategy::kOracle, env, src, spectrum, rcv, noise, prior);
  const Cell want = field_peak(oracle).cell;
  for (Strategy s : {Strategy::kAllFreq, Strategy::kBestFreq,
                     Strategy::kHighestEnergy, Strategy::kFreqAdaptive}) {
    const auto field = predict_field(s, env, src, spectrum, rcv, noise, prior);
    CHECK(field_peak(field).cell == want);
  }

  CHECK_THROWS_AS(predict_field(Strategy::kRandom, env, src, spectrum, rcv,
                                noise, prior),
                  std::invalid_argument);
}

TEST_CASE("a clean loud band beats a trusted but corrupted band") {
  // The source sings only in band 3, whose noise is zero; the prior however
  // trusts band 0, which is heavily corrupted. Trusting energy finds the
  // oracle peak every time; trusting the prior rarely does.
  const auto g = open_room(20, 20);
  auto env = AcousticEnv::grid_world(g);
  const Vec2 src{7.25, 4.75};
  const Vec2 rcv{4.75, 4.75};
  const BandSpectrum spectrum{{0.0, 0.0, 0.0, 1.0, 0.0}};
  const BandErrorPrior prior{{0.01, 1.0, 1.0, 1.0, 1.0}, 5.0, 0.8};

  NoiseModel noise = NoiseModel::zero(5, 0);
  noise.sigma = {3.0, 3.0, 3.0, 0.0, 3.0};

  int highest_hits = 0;
  int best_hits = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    noise.seed = seed;
    const auto oracle =
        predict_field(Strategy::kOracle, env, src, spectrum, rcv, noise, prior);
    const Cell want = field_peak(oracle).cell;
    const auto loud = predict_field(Strategy::kHighestEnergy, env, src, spectrum,
                                    rcv, noise, prior);
    const auto trusted = predict_field(Strategy::kBestFreq, env, src, spectrum,
                                       rcv, noise, prior);
    highest_hits += field_peak(loud).cell == want ? 1 : 0;
    best_hits += field_peak(trusted).cell == want ? 1 : 0;
  }
  CHECK(highest_hits == 100);
  CHECK(best_hits < 50);
}

TEST_CASE("a flat spectrum reduces the adaptive choice to the best band") {
  // Uniform absorption makes every band arrive equally loud, so the energy
  // weights are all one and the adaptive strategy must reproduce the
  // best-frequency output exactly.
  const auto g = open_room(16, 16);
  auto env = AcousticEnv::grid_world(g, {0.9, 0.9, 0.9});
  const Vec2 src{5.5, 3.0};
  const Vec2 rcv{2.75, 3.25};
  const BandSpectrum spectrum{{2.0, 2.0, 2.0}};
  const BandErrorPrior prior{{0.3, 0.2, 0.4}, 5.0, 0.8};
  NoiseModel noise = NoiseModel::zero(3, 11);
  noise.sigma = {0.5, 0.5, 0.5};
  noise.epsilon = {0.01, 0.01, 0.01};

  const auto adaptive = predict_field(Strategy::kFreqAdaptive, env, src, spectrum,
                                      rcv, noise, prior);
  const auto best =
      predict_field(Strategy::kBestFreq, env, src, spectrum, rcv, noise, prior);
  CHECK(adaptive.values == best.values);
  CHECK(adaptive.band == 1);
}

TEST_CASE("silence at the receiver raises no-signal") {
  const auto g = OccupancyGrid::from_ascii(
      "res 0.5\n"
      "##########\n"
      "#...##...#\n"
      "#...##...#\n"
      "#...##...#\n"
      "##########\n");
  auto env = AcousticEnv::grid_world(g);
  const BandSpectrum spectrum{{1.0, 1.0, 1.0, 1.0, 1.0}};
  CHECK_THROWS_WITH_AS(
      predict_field(Strategy::kFreqAdaptive, env, {0.5, 0.5}, spectrum,
                    {3.5, 1.0}, NoiseModel::zero(5, 0), uniform_prior(5)),
      "no signal", std::runtime_error);
}

TEST_CASE("calibration floors noise-free errors and reproduces itself") {
  const auto g = open_room(20, 20);
  auto env = AcousticEnv::grid_world(g, {0.95, 0.95});
  Rng rng(0xCA11B8ULL);
  const auto free = g.free_cells();
  std::vector<CalibrationSample> samples;
  for (int i = 0; i < 40; ++i) {
    const Vec2 source = g.cell_center(free[rng.next_below(free.size())]);
    const Vec2 receiver = g.cell_center(free[rng.next_below(free.size())]);
    samples.push_back({&env, source, {{1.0, 1.0}}, receiver});
  }

  CalibrationReport report;
  const auto prior = calibrate_band_errors(samples, NoiseModel::zero(2, 5), 5.0,
                                           0.8, &report);
  CHECK(prior.errors == std::vector<double>{kCalibrationFloor, kCalibrationFloor});
  CHECK(report.mean_error == std::vector<double>{0.0, 0.0});
  CHECK(report.n_samples == 40);

  NoiseModel noise = NoiseModel::zero(2, 5);
  noise.sigma = {0.9, 0.1};
  const auto a = calibrate_band_errors(samples, noise);
  const auto b = calibrate_band_errors(samples, noise);
  CHECK(a.errors == b.errors);
  // The heavily corrupted band must calibrate to a larger error.
  CHECK(a.errors[0] > a.errors[1]);
  CHECK(a.errors[1] >= kCalibrationFloor);

  const auto csv = calibration_report_csv(report);
  CHECK(csv.starts_with("band,mean_error_m,std_error_m,n_samples\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  // Colored spectra cannot calibrate band errors.
  samples[0].spectrum = {{1.0, 2.0}};
  CHECK_THROWS_WITH_AS(calibrate_band_errors(samples, noise),
                       "calibration requires white-noise source",
                       std::runtime_error);
}

}  // namespace
}  // namespace echonav
