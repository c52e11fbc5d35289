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

#include "echonav/eval.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "echonav/io.hpp"
#include "echonav/rng.hpp"

namespace echonav {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool navigates(Strategy s) { return s != Strategy::kRandom; }
bool predicts(Strategy s) { return s != Strategy::kDirectionFollower; }

Vec2 peak_world(const AcousticField& field) {
  const FieldPeak p = field_peak(field);
  return field.cell_world(p.cell.y, p.cell.x);
}

double bearing_gap(const AcousticField& a, Vec2 pa, const AcousticField& b, Vec2 pb) {
  const Vec2 da = pa - a.center;
  const Vec2 db = pb - b.center;
  const bool za = da.x == 0.0 && da.y == 0.0;
  const bool zb = db.x == 0.0 && db.y == 0.0;
  if (za && zb) return 0.0;
  if (za || zb) return std::numbers::pi / 2.0;  // a centered peak points nowhere
  return std::abs(wrap_pi(std::atan2(da.y, da.x) - std::atan2(db.y, db.x)));
}

// The random baseline guesses a uniform non-center cell, keyed off the
// episode so the draw does not depend on evaluation order.
AcousticField random_prediction(const AcousticField& truth, const Episode& e, uint64_t seed) {
  AcousticField f = truth;
  std::fill(f.values.begin(), f.values.end(), 0.0);
  const int cells = f.size * f.size;
  const int center = cells / 2;
  const double u = keyed_uniform(seed, static_cast<uint64_t>(e.episode_id), e.seed);
  int pick = static_cast<int>(u * (cells - 1));
  if (pick >= cells - 1) pick = cells - 2;
  if (pick >= center) ++pick;
  f.values[static_cast<size_t>(pick)] = 1.0;
  return f;
}

}  // namespace

EvalReport evaluate(const std::map<std::string, AcousticEnv>& envs,
                    const std::vector<Episode>& episodes, const NoiseModel& noise,
                    const BandErrorPrior& prior, const EvalOptions& options) {
  if (episodes.empty()) throw std::invalid_argument("no episodes");
  if (options.strategies.empty()) throw std::invalid_argument("no strategies");
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (const Episode& e : episodes) {
    if (!envs.count(e.scene)) {
      throw std::invalid_argument("episode references unknown scene: " + e.scene);
    }
  }

  const size_t n_eps = episodes.size();
  const size_t n_str = options.strategies.size();
  std::vector<std::optional<EpisodeResult>> nav_slots(n_eps * n_str);
  std::vector<std::optional<PredictionSample>> pred_slots(n_eps * n_str);

  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (;;) {
      const size_t k = cursor.fetch_add(1);
      if (k >= n_eps * n_str || failed.load()) return;
      const Strategy strategy = options.strategies[k / n_eps];
      const Episode& ep = episodes[k % n_eps];
      const AcousticEnv& env = envs.at(ep.scene);
      try {
        if (options.navigation && navigates(strategy)) {
          nav_slots[k] = run_episode(env, ep, strategy, noise, prior, options.nav);
        }
        if (options.prediction && predicts(strategy)) {
          const Vec2 rcv = ep.start.position();
          const BandSpectrum r = received_band_energies(env, ep.goal, ep.spectrum, rcv);
          size_t loudest = 0;
          for (size_t i = 1; i < r.energies.size(); ++i) {
            if (r.energies[i] > r.energies[loudest]) loudest = i;
          }
          const AcousticField truth = compute_field(env, ep.goal, rcv,
                                                    static_cast<int>(loudest),
                                                    options.nav.field_size);
          const AcousticField guess =
              strategy == Strategy::kRandom
                  ? random_prediction(truth, ep, noise.seed)
                  : predict_field(strategy, env, ep.goal, ep.spectrum, rcv, noise, prior,
                                  options.nav.field_size);
          const Vec2 pg = peak_world(guess);
          const Vec2 pt = peak_world(truth);
          pred_slots[k] = PredictionSample{ep.episode_id, bearing_gap(guess, pg, truth, pt),
                                           distance(pg, pt)};
        }
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) error = ex.what();
        return;
      }
    }
  };

  if (options.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(options.workers));
    for (int i = 0; i < options.workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error(error);

  EvalReport report;
  for (size_t s = 0; s < n_str; ++s) {
    const std::string name(strategy_name(options.strategies[s]));
    AggregateRow row{name, kNan, kNan, kNan, kNan, kNan, static_cast<int>(n_eps)};
    double sum_s = 0.0, sum_spl = 0.0, sum_soft = 0.0, sum_angle = 0.0, sum_dist = 0.0;
    size_t navs = 0, preds = 0;
    for (size_t e = 0; e < n_eps; ++e) {
      const size_t k = s * n_eps + e;
      if (nav_slots[k]) {
        report.results.emplace_back(name, *nav_slots[k]);
        sum_s += nav_slots[k]->success;
        sum_spl += nav_slots[k]->spl;
        sum_soft += nav_slots[k]->soft_spl;
        ++navs;
      }
      if (pred_slots[k]) {
        report.predictions.emplace_back(name, *pred_slots[k]);
        sum_angle += pred_slots[k]->angle_err;
        sum_dist += pred_slots[k]->dist_err;
        ++preds;
      }
    }
    if (navs > 0) {
      row.sr = sum_s / static_cast<double>(navs);
      row.spl = sum_spl / static_cast<double>(navs);
      row.soft_spl = sum_soft / static_cast<double>(navs);
    }
    if (preds > 0) {
      row.angle_err = sum_angle / static_cast<double>(preds);
      row.dist_err = sum_dist / static_cast<double>(preds);
    }
    report.aggregate.push_back(std::move(row));
  }
  return report;
}

std::string results_csv(const EvalReport& report) {
  std::string csv = "episode_id,strategy,S,l,p,steps,spl,soft_spl,status\n";
  for (const auto& [strategy, r] : report.results) {
    csv += std::to_string(r.episode_id);
    csv += ',';
    csv += strategy;
    csv += ',';
    csv += std::to_string(r.success);
    csv += ',';
    csv += format_double(r.shortest);
    csv += ',';
    csv += format_double(r.traveled);
    csv += ',';
    csv += std::to_string(r.steps);
    csv += ',';
    csv += format_double(r.spl);
    csv += ',';
    csv += format_double(r.soft_spl);
    csv += ',';
    csv += r.status;
    csv += '\n';
  }
  return csv;
}

std::string aggregate_csv(const EvalReport& report) {
  std::string csv = "strategy,sr,spl,soft_spl,angle_err,dist_err,n\n";
  for (const AggregateRow& row : report.aggregate) {
    csv += row.strategy;
    csv += ',';
    csv += format_double(row.sr);
    csv += ',';
    csv += format_double(row.spl);
    csv += ',';
    csv += format_double(row.soft_spl);
    csv += ',';
    csv += format_double(row.angle_err);
    csv += ',';
    csv += format_double(row.dist_err);
    csv += ',';
    csv += std::to_string(row.n);
    csv += '\n';
  }
  return csv;
}

}  // namespace echonav
