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
#include <span>
#include <stdexcept>

#include "echonav/io.hpp"
#include "echonav/rng.hpp"
#include "json.hpp"

namespace echonav {
namespace {

void check_prior(const BandErrorPrior& prior) {
  if (prior.errors.empty()) throw std::invalid_argument("prior has no bands");
  for (double e : prior.errors) {
    if (!std::isfinite(e) || e <= 0.0) {
      throw std::invalid_argument("prior errors must be positive");
    }
  }
  if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
    throw std::invalid_argument("alpha and beta must be positive");
  }
}

void check_noise(const NoiseModel& noise, int bands) {
  if (static_cast<int>(noise.sigma.size()) != bands ||
      static_cast<int>(noise.epsilon.size()) != bands) {
    throw std::invalid_argument("noise model band count mismatch");
  }
  for (double s : noise.sigma) {
    if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("sigma must be >= 0");
  }
  for (double e : noise.epsilon) {
    if (!std::isfinite(e) || e < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  }
}

int lowest_argmax(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<size_t>(i)] > v[static_cast<size_t>(best)]) best = i;
  }
  return best;
}

int lowest_argmin(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<size_t>(i)] < v[static_cast<size_t>(best)]) best = i;
  }
  return best;
}

bool any_positive(const std::vector<double>& v) {
  for (double x : v) {
    if (x > 0.0) return true;
  }
  return false;
}

}  // namespace

std::string prior_to_json(const BandErrorPrior& prior) {
  check_prior(prior);
  nlohmann::ordered_json j;
  j["e"] = prior.errors;
  j["alpha"] = prior.alpha;
  j["beta"] = prior.beta;
  return j.dump(2) + "\n";
}

BandErrorPrior prior_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("e") || !j.contains("alpha") || !j.contains("beta")) {
    throw std::invalid_argument("prior JSON needs 'e', 'alpha' and 'beta'");
  }
  BandErrorPrior prior;
  prior.errors = j.at("e").get<std::vector<double>>();
  prior.alpha = j.at("alpha").get<double>();
  prior.beta = j.at("beta").get<double>();
  check_prior(prior);
  return prior;
}

NoiseModel NoiseModel::zero(int bands, uint64_t seed) {
  NoiseModel noise;
  noise.sigma.assign(static_cast<size_t>(bands), 0.0);
  noise.epsilon.assign(static_cast<size_t>(bands), 0.0);
  noise.seed = seed;
  return noise;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kOracle: return "oracle";
    case Strategy::kAllFreq: return "all_freq";
    case Strategy::kBestFreq: return "best_freq";
    case Strategy::kHighestEnergy: return "highest_energy";
    case Strategy::kFreqAdaptive: return "freq_adaptive";
    case Strategy::kRandom: return "random";
    case Strategy::kDirectionFollower: return "direction_follower";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kOracle, Strategy::kAllFreq, Strategy::kBestFreq,
                     Strategy::kHighestEnergy, Strategy::kFreqAdaptive,
                     Strategy::kRandom, Strategy::kDirectionFollower}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

bool has_field_predictor(Strategy s) {
  return s != Strategy::kRandom && s != Strategy::kDirectionFollower;
}

WeightBreakdown band_weights(const BandErrorPrior& prior, const BandSpectrum& r) {
  check_prior(prior);
  if (r.energies.size() != prior.errors.size()) {
    throw std::invalid_argument("spectrum and prior band counts differ");
  }
  for (double e : r.energies) {
    if (!std::isfinite(e) || e < 0.0) {
      throw std::invalid_argument("band energies must be finite and >= 0");
    }
  }
  const size_t n = prior.errors.size();
  double r_max = 0.0;
  for (double e : r.energies) r_max = std::max(r_max, e);
  if (r_max <= 0.0) throw std::runtime_error("all band energies are zero");

  WeightBreakdown out;
  out.p.resize(n);
  out.q.resize(n);
  out.w.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.p[i] = std::pow(1.0 / prior.errors[i], prior.alpha);
    out.q[i] = std::pow(r.energies[i] / r_max, prior.beta);
    out.w[i] = out.p[i] * out.q[i];
  }
  out.chosen = lowest_argmax(out.w);
  return out;
}

AcousticField observed_field(const AcousticEnv& env, Vec2 source, Vec2 receiver,
                             int band, const NoiseModel& noise, int size) {
  check_noise(noise, env.band_count());
  AcousticField field = compute_field(env, source, receiver, band, size);
  const double sigma = noise.sigma[static_cast<size_t>(band)];
  const double epsilon = noise.epsilon[static_cast<size_t>(band)];
  if (sigma == 0.0 && epsilon == 0.0) return field;
  for (size_t i = 0; i < field.values.size(); ++i) {
    double v = field.values[i];
    if (sigma != 0.0) {
      const double g = keyed_normal(noise.seed, static_cast<uint64_t>(band),
                                    bits_of(receiver.x), bits_of(receiver.y),
                                    static_cast<uint64_t>(i));
      v *= std::exp(sigma * g);
    }
    field.values[i] = v + epsilon;
  }
  return field;
}

AcousticField predict_field(Strategy strategy, const AcousticEnv& env,
                            Vec2 source, const BandSpectrum& spectrum,
                            Vec2 receiver, const NoiseModel& noise,
                            const BandErrorPrior& prior, int size) {
  if (!has_field_predictor(strategy)) {
    throw std::invalid_argument("strategy has no field predictor");
  }
  const BandSpectrum r = received_band_energies(env, source, spectrum, receiver);
  if (!any_positive(r.energies)) throw std::runtime_error("no signal");

  switch (strategy) {
    case Strategy::kOracle:
      return compute_field(env, source, receiver, lowest_argmax(r.energies), size);
    case Strategy::kBestFreq: {
      check_prior(prior);
      if (prior.errors.size() != r.energies.size()) {
        throw std::invalid_argument("prior band count mismatch");
      }
      return observed_field(env, source, receiver, lowest_argmin(prior.errors),
                            noise, size);
    }
    case Strategy::kHighestEnergy:
      return observed_field(env, source, receiver, lowest_argmax(r.energies),
                            noise, size);
    case Strategy::kFreqAdaptive:
      return observed_field(env, source, receiver, band_weights(prior, r).chosen,
                            noise, size);
    case Strategy::kAllFreq: {
      const double total = pairwise_sum(r.energies);
      AcousticField out;
      bool first = true;
      for (size_t band = 0; band < r.energies.size(); ++band) {
        if (r.energies[band] <= 0.0) continue;
        AcousticField obs = observed_field(env, source, receiver,
                                           static_cast<int>(band), noise, size);
        const double weight = r.energies[band] / total;
        if (first) {
          out = std::move(obs);
          for (double& v : out.values) v *= weight;
          out.band = AcousticField::kAllBands;
          first = false;
        } else {
          for (size_t i = 0; i < out.values.size(); ++i) {
            out.values[i] += weight * obs.values[i];
          }
        }
      }
      return out;
    }
    default:
      throw std::invalid_argument("strategy has no field predictor");
  }
}

FieldPeak field_peak(const AcousticField& field) {
  if (field.values.empty()) throw std::invalid_argument("empty field");
  FieldPeak best{Cell{0, 0}, field.values[0]};
  for (int row = 0; row < field.size; ++row) {
    for (int col = 0; col < field.size; ++col) {
      const double v = field.at(row, col);
      if (v > best.value) best = {Cell{col, row}, v};
    }
  }
  return best;
}

std::string calibration_report_csv(const CalibrationReport& report) {
  std::string out = "band,mean_error_m,std_error_m,n_samples\n";
  for (size_t i = 0; i < report.mean_error.size(); ++i) {
    out += std::to_string(i) + "," + format_double(report.mean_error[i]) + "," +
           format_double(report.std_error[i]) + "," +
           std::to_string(report.n_samples) + "\n";
  }
  return out;
}

BandErrorPrior calibrate_band_errors(const std::vector<CalibrationSample>& eval_set,
                                     const NoiseModel& noise, double alpha,
                                     double beta, CalibrationReport* report,
                                     double error_floor) {
  if (eval_set.empty()) throw std::invalid_argument("calibration needs samples");
  if (!(error_floor > 0.0)) throw std::invalid_argument("error floor must be positive");
  const int bands = eval_set.front().env->band_count();
  check_noise(noise, bands);
  for (const CalibrationSample& sample : eval_set) {
    const auto& s = sample.spectrum.energies;
    if (static_cast<int>(s.size()) != bands) {
      throw std::invalid_argument("sample spectrum band count mismatch");
    }
    for (double e : s) {
      if (e != s[0] || !(e > 0.0)) {
        throw std::runtime_error("calibration requires white-noise source");
      }
    }
  }

  CalibrationReport rep;
  rep.n_samples = static_cast<int>(eval_set.size());
  BandErrorPrior prior;
  prior.alpha = alpha;
  prior.beta = beta;
  std::vector<double> dist(eval_set.size());
  for (int band = 0; band < bands; ++band) {
    for (size_t k = 0; k < eval_set.size(); ++k) {
      const CalibrationSample& sample = eval_set[k];
      const AcousticField truth =
          compute_field(*sample.env, sample.source, sample.receiver, band);
      const AcousticField noisy =
          observed_field(*sample.env, sample.source, sample.receiver, band, noise);
      const FieldPeak tp = field_peak(truth);
      const FieldPeak np = field_peak(noisy);
      dist[k] = distance(truth.cell_world(tp.cell.y, tp.cell.x),
                         noisy.cell_world(np.cell.y, np.cell.x));
    }
    rep.mean_error.push_back(mean_of(dist));
    rep.std_error.push_back(stddev_of(dist));
    prior.errors.push_back(std::max(rep.mean_error.back(), error_floor));
  }
  if (report != nullptr) *report = rep;
  return prior;
}

}  // namespace echonav
