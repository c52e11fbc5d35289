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

// Acceptance gate. Each criterion prints one PASS/FAIL line with its elapsed
// time; the process exits nonzero when any criterion fails. Criterion 8
// drives the installed CLI binary, whose path arrives as argv[1].

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "echonav/acoustics.hpp"
#include "echonav/afp.hpp"
#include "echonav/episodes.hpp"
#include "echonav/eval.hpp"
#include "echonav/fmm.hpp"
#include "echonav/mapgen.hpp"
#include "echonav/rng.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace echonav;

namespace {

// Failure collector. Records the first few offending comparisons so the
// PASS/FAIL line can say what actually went wrong.
struct Check {
  bool ok = true;
  int failures = 0;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (++failures <= 3) {
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

bool near(double a, double b, double eps) {
  return std::abs(a - b) <= eps * (1.0 + std::max(std::abs(a), std::abs(b)));
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared samplers

struct SamplePair {
  Vec2 src, rcv;
};

// Free-cell-center pairs whose geodesic separation lies in [dlo, dhi].
std::vector<SamplePair> draw_pairs(const OccupancyGrid& grid, int n, uint64_t seed,
                                   double dlo, double dhi) {
  const auto free = grid.free_cells();
  const NavMask mask = NavMask::from_grid(grid);
  Rng rng(seed);
  std::vector<SamplePair> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard < n * 10000) {
    ++guard;
    const Cell a = free[rng.next_below(free.size())];
    const Cell b = free[rng.next_below(free.size())];
    if (a == b) continue;
    const double g = fmm_solve(mask, a).at(b);
    if (!std::isfinite(g) || g < dlo || g > dhi) continue;
    out.push_back(SamplePair{grid.cell_center(a), grid.cell_center(b)});
  }
  return out;
}

Vec2 peak_world(const AcousticField& f) {
  const FieldPeak p = field_peak(f);
  return f.cell_world(p.cell.y, p.cell.x);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// 2.5th percentile of B bootstrap resample means.
double bootstrap_lower(const std::vector<double>& sample, int B, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> means(static_cast<size_t>(B));
  for (int b = 0; b < B; ++b) {
    double s = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) s += sample[rng.next_below(sample.size())];
    means[static_cast<size_t>(b)] = s / static_cast<double>(sample.size());
  }
  std::sort(means.begin(), means.end());
  return means[static_cast<size_t>(0.025 * B)];
}

// ---------------------------------------------------------------------------
// 1. Band selection: hand-checked examples plus argmax limit properties.

void criterion_band_selection(Check& c) {
  {
    const BandErrorPrior uniform_prior{{1, 1, 1, 1, 1}, 5.0, 0.8};
    const BandSpectrum r{{1, 2, 4, 2, 1}};
    c.expect(band_weights(uniform_prior, r).chosen == 2, "uniform prior: loudest band not chosen");
  }
  {
    const BandErrorPrior prior{{3, 2, 1, 2, 3}, 5.0, 0.8};
    const BandSpectrum flat{{2, 2, 2, 2, 2}};
    const WeightBreakdown wb = band_weights(prior, flat);
    c.expect(wb.chosen == 2, "flat spectrum: most trusted band not chosen");
    for (int i = 0; i < 5; ++i) {
      c.expect(wb.q[static_cast<size_t>(i)] == 1.0, "flat spectrum: q != 1");
      c.expect(wb.w[static_cast<size_t>(i)] == wb.p[static_cast<size_t>(i)],
               "flat spectrum: w != p");
    }
  }
  {
    const BandErrorPrior prior{{0.5, 1.0}, 1.0, 1.0};
    const WeightBreakdown wb = band_weights(prior, BandSpectrum{{1, 4}});
    c.expect(wb.p == std::vector<double>{2.0, 1.0}, "two-band example: p");
    c.expect(wb.q == std::vector<double>{0.25, 1.0}, "two-band example: q");
    c.expect(wb.w == std::vector<double>{0.5, 1.0}, "two-band example: w");
    c.expect(wb.chosen == 1, "two-band example: chosen");
  }

  Rng rng(0x5EED1ULL);
  for (int trial = 0; trial < 1000; ++trial) {
    BandErrorPrior prior;
    for (int i = 0; i < 5; ++i) prior.errors.push_back(rng.next_uniform(0.05, 2.0));
    prior.alpha = rng.next_uniform(0.5, 6.0);
    prior.beta = rng.next_uniform(0.1, 2.0);
    BandSpectrum r;
    for (int i = 0; i < 5; ++i) {
      r.energies.push_back(rng.next_double() < 0.2 ? 0.0 : rng.next_uniform(0.01, 5.0));
    }
    if (!r.valid()) r.energies[0] = 1.0;

    const int base = band_weights(prior, r).chosen;
    for (double scale : {1e-3, 37.5, 1e3}) {
      BandSpectrum scaled = r;
      for (double& e : scaled.energies) e *= scale;
      c.expect(band_weights(prior, scaled).chosen == base, "selection moved under energy scaling");
    }

    BandErrorPrior no_prior = prior;
    no_prior.alpha = 1e-9;
    int loudest = 0;
    for (int i = 1; i < 5; ++i) {
      if (r.energies[static_cast<size_t>(i)] > r.energies[static_cast<size_t>(loudest)]) loudest = i;
    }
    c.expect(band_weights(no_prior, r).chosen == loudest, "alpha->0 is not pure energy");

    BandSpectrum all_on;
    for (int i = 0; i < 5; ++i) all_on.energies.push_back(rng.next_uniform(0.1, 5.0));
    BandErrorPrior no_energy = prior;
    no_energy.beta = 1e-9;
    int most_trusted = 0;
    for (int i = 1; i < 5; ++i) {
      if (prior.errors[static_cast<size_t>(i)] < prior.errors[static_cast<size_t>(most_trusted)]) {
        most_trusted = i;
      }
    }
    c.expect(band_weights(no_energy, all_on).chosen == most_trusted, "beta->0 is not pure prior");
  }
}

// ---------------------------------------------------------------------------
// 2. Marching distances against a 16-connected lattice reference.

void criterion_distance_accuracy(Check& c) {
  Rng rng(0xACCE55ULL);
  for (int m = 0; m < 50; ++m) {
    MapGenParams params;
    params.seed = 100 + static_cast<uint64_t>(m);
    const OccupancyGrid grid = generate_map(params);
    const NavMask mask = NavMask::from_grid(grid);
    const auto free = grid.free_cells();
    const Cell src = free[rng.next_below(free.size())];

    const DistanceField f = fmm_solve(mask, src);
    const auto ref = oracle::dijkstra16(mask, src);
    for (size_t i = 0; i < ref.size(); ++i) {
      const bool finite = std::isfinite(f.values[i]);
      c.expect(finite == std::isfinite(ref[i]), "reachability disagrees with lattice reference");
      if (finite && ref[i] > 0.0) {
        c.expect(std::abs(f.values[i] - ref[i]) / ref[i] <= 0.10,
                 "relative error above 10% (map seed " + std::to_string(params.seed) + ")");
      }
    }

    // Straight unobstructed runs through the source must come out exact.
    const double h = grid.resolution();
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      for (int k = 1;; ++k) {
        const Cell cell{src.x + k * dx, src.y + k * dy};
        if (!grid.in_bounds(cell) || !grid.is_free(cell)) break;
        c.expect(std::abs(f.at(cell) - k * h) <= 1e-6, "axis-aligned run not exact");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Echo taps: reciprocity, mirror-enumeration reference, pressure decay.

void criterion_acoustics(Check& c) {
  Rng rng(0xACC3ULL);
  for (int trial = 0; trial < 20; ++trial) {
    RoomSpec room;
    room.width = rng.next_uniform(2.5, 10.0);
    room.height = rng.next_uniform(2.5, 10.0);
    for (int b = 0; b < 5; ++b) room.reflection.push_back(rng.next_uniform(0.2, 0.9));
    const Vec2 src{rng.next_uniform(0.2, room.width - 0.2),
                   rng.next_uniform(0.2, room.height - 0.2)};
    const Vec2 rcv{rng.next_uniform(0.2, room.width - 0.2),
                   rng.next_uniform(0.2, room.height - 0.2)};
    const int order = trial % 3;
    const int band = trial % 5;

    const ImpulseResponse fwd = image_source_rir(room, src, rcv, order, band);
    const ImpulseResponse rev = image_source_rir(room, rcv, src, order, band);
    c.expect(fwd.taps.size() == rev.taps.size(), "swap changed the tap count");
    for (size_t i = 0; i < std::min(fwd.taps.size(), rev.taps.size()); ++i) {
      c.expect(fwd.taps[i].delay == rev.taps[i].delay &&
                   fwd.taps[i].amplitude == rev.taps[i].amplitude,
               "swap changed a tap");
    }

    const auto ref =
        oracle::image_taps(room, src, rcv, room.reflection[static_cast<size_t>(band)], order);
    c.expect(fwd.taps.size() == ref.size(), "tap count differs from mirror enumeration");
    for (size_t i = 0; i < std::min(fwd.taps.size(), ref.size()); ++i) {
      c.expect(near(fwd.taps[i].delay, ref[i].delay, 1e-12) &&
                   near(fwd.taps[i].amplitude, ref[i].amplitude, 1e-12),
               "tap differs from mirror enumeration");
    }
  }

  // Pressure may never rise while walking away from the source along a
  // geodesic. Walks follow the marcher's own downhill steps in reverse.
  MapGenParams params;
  params.seed = 100;
  const OccupancyGrid grid = generate_map(params);
  const AcousticEnv env = AcousticEnv::grid_world(grid);
  const NavMask mask = NavMask::from_grid(grid);
  const auto free = grid.free_cells();
  for (int s = 0; s < 3; ++s) {
    const Cell src = free[rng.next_below(free.size())];
    const DistanceField f = fmm_solve(mask, src);
    const Vec2 src_w = grid.cell_center(src);
    for (int w = 0; w < 4; ++w) {
      Cell cur = free[rng.next_below(free.size())];
      if (!f.finite_at(cur)) continue;
      std::vector<Cell> path{cur};
      for (int step = 0; step < 10000 && f.at(cur) > 0.0; ++step) {
        const Cell next = descend_step(f, cur);
        if (next == cur) break;
        c.expect(f.at(next) <= f.at(cur) + 1e-12, "downhill step increased the distance");
        cur = next;
        path.push_back(cur);
      }
      for (int band = 0; band < env.band_count(); ++band) {
        for (size_t i = 1; i < path.size(); ++i) {
          const double nearer = env.pressure(src_w, grid.cell_center(path[i]), band);
          const double farther = env.pressure(src_w, grid.cell_center(path[i - 1]), band);
          c.expect(farther <= nearer + 1e-12, "pressure rose with distance along a geodesic");
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Full navigation with the noise-free predictor across procedural maps.

void criterion_navigation(Check& c) {
  std::map<std::string, AcousticEnv> envs;
  std::vector<Episode> episodes;
  std::map<std::string, OccupancyGrid> grids;
  for (int m = 0; m < 10; ++m) {
    MapGenParams params;
    params.seed = static_cast<uint64_t>(m);
    const std::string scene = "scene_" + std::to_string(m);
    const OccupancyGrid grid = generate_map(params);
    EpisodeConstraints constraints;
    constraints.min_geodesic = 2.0;
    constraints.max_geodesic = 12.0;
    auto eps = generate_episodes(grid, scene, 20, 1000 + static_cast<uint64_t>(m), constraints,
                                 {}, m * 20);
    episodes.insert(episodes.end(), eps.begin(), eps.end());
    envs.emplace(scene, AcousticEnv::grid_world(grid));
  }

  EvalOptions options;
  options.strategies = {Strategy::kOracle};
  options.workers = 4;
  options.prediction = false;
  const BandErrorPrior prior{{1, 1, 1, 1, 1}, 5.0, 0.8};
  const EvalReport report =
      evaluate(envs, episodes, NoiseModel::zero(5, 0), prior, options);

  c.expect(report.aggregate.size() == 1 && report.aggregate[0].n == 200,
           "expected one aggregate row over 200 episodes");
  if (!report.aggregate.empty()) {
    const AggregateRow& row = report.aggregate[0];
    c.expect(row.sr >= 0.90, "success rate " + fmt("%.3f", row.sr) + " below 0.90");
    c.expect(row.spl >= 0.70, "mean spl " + fmt("%.3f", row.spl) + " below 0.70");
  }
}

// ---------------------------------------------------------------------------
// 5. Error ordering across prediction strategies under band noise.

void criterion_strategy_ordering(Check& c) {
  MapGenParams params;
  params.seed = 1;
  const OccupancyGrid grid = generate_map(params);
  const AcousticEnv env = AcousticEnv::grid_world(grid);

  NoiseModel noise = NoiseModel::zero(5, 99);
  noise.sigma = {0.8, 0.4, 0.2, 0.1, 0.3};

  std::vector<CalibrationSample> cal;
  const BandSpectrum flat{std::vector<double>(5, 1.0)};
  for (const SamplePair& p : draw_pairs(grid, 600, 7, 2.0, 8.0)) {
    cal.push_back({&env, p.src, flat, p.rcv});
  }
  const BandErrorPrior prior = calibrate_band_errors(cal, noise, 5.0, 0.8, nullptr);

  // Skewed source mixtures: two near-tones and a mid-weighted profile whose
  // loudest band is also the noisiest of the occupied ones.
  const BandSpectrum profiles[3] = {
      BandSpectrum{{1.0, 0.02, 0.02, 0.02, 0.02}},
      BandSpectrum{{0.4, 0.1, 0.1, 1.0, 0.4}},
      BandSpectrum{{0.05, 1.0, 0.05, 0.05, 0.05}},
  };
  const int counts[3] = {150, 300, 150};
  const Strategy strategies[4] = {Strategy::kFreqAdaptive, Strategy::kHighestEnergy,
                                  Strategy::kAllFreq, Strategy::kBestFreq};
  const auto pairs = draw_pairs(grid, 600, 21, 3.0, 12.0);
  std::vector<std::vector<double>> err(4);
  size_t k = 0;
  for (int pi = 0; pi < 3; ++pi) {
    for (int rep = 0; rep < counts[pi]; ++rep, ++k) {
      const SamplePair& p = pairs[k];
      const Vec2 truth = peak_world(compute_field(env, p.src, p.rcv, 0));
      for (int s = 0; s < 4; ++s) {
        const AcousticField f =
            predict_field(strategies[s], env, p.src, profiles[pi], p.rcv, noise, prior);
        err[static_cast<size_t>(s)].push_back(distance(peak_world(f), truth));
      }
    }
  }

  const double adaptive = mean_of(err[0]);
  const double loudest = mean_of(err[1]);
  const double all_bands = mean_of(err[2]);
  const double best_band = mean_of(err[3]);
  c.expect(adaptive <= loudest, "adaptive mean above highest-energy mean");
  c.expect(loudest <= all_bands, "highest-energy mean above all-band mean");
  c.expect(adaptive <= best_band, "adaptive mean above best-band mean");

  const struct {
    int worse, better;
    const char* label;
  } margins[3] = {{1, 0, "highest-energy vs adaptive"},
                  {2, 1, "all-band vs highest-energy"},
                  {3, 0, "best-band vs adaptive"}};
  for (const auto& m : margins) {
    std::vector<double> diff(err[0].size());
    for (size_t i = 0; i < diff.size(); ++i) {
      diff[i] = err[static_cast<size_t>(m.worse)][i] - err[static_cast<size_t>(m.better)][i];
    }
    const double lb = bootstrap_lower(diff, 2000, 17);
    c.expect(lb >= 0.0,
             std::string(m.label) + " margin LB " + fmt("%.4f", lb) + " below zero");
  }
}

// ---------------------------------------------------------------------------
// 6. Calibrated per-band errors must recover the injected noise ordering.

void criterion_calibration_ordering(Check& c) {
  MapGenParams params;
  params.seed = 1;
  const OccupancyGrid grid = generate_map(params);
  const AcousticEnv env = AcousticEnv::grid_world(grid);

  NoiseModel noise = NoiseModel::zero(5, 99);
  noise.sigma = {0.8, 0.4, 0.2, 0.1, 0.3};

  std::vector<CalibrationSample> cal;
  const BandSpectrum flat{std::vector<double>(5, 1.0)};
  for (const SamplePair& p : draw_pairs(grid, 2000, 7, 2.0, 8.0)) {
    cal.push_back({&env, p.src, flat, p.rcv});
  }
  const BandErrorPrior prior = calibrate_band_errors(cal, noise, 5.0, 0.8, nullptr);

  const auto& e = prior.errors;
  std::string seen = "e = [";
  for (size_t i = 0; i < e.size(); ++i) seen += (i ? ", " : "") + fmt("%.4f", e[i]);
  seen += "]";
  // sigma sorts 0 > 1 > 4 > 2 > 3; the learned errors must sort the same way.
  c.expect(e[0] > e[1] && e[1] > e[4] && e[4] > e[2] && e[2] > e[3],
           "calibrated errors misordered: " + seen);
}

// ---------------------------------------------------------------------------
// 7. Path-efficiency metrics.

void criterion_metrics(Check& c) {
  c.expect(spl(1, 10.0, 12.5) == 0.8, "spl(1, 10, 12.5) != 0.8");
  c.expect(soft_spl(10.0, 12.5) == 0.8, "soft_spl(10, 12.5) != 0.8");
  c.expect(spl(1, 10.0, 7.0) == 1.0, "shorter-than-geodesic travel must clamp to 1");
  c.expect(spl(1, 10.0, 0.0) == 1.0, "zero travel must clamp to 1");
  c.expect(spl(0, 10.0, 12.5) == 0.0, "failed episode must score 0");
  c.expect(soft_spl(10.0, 0.0) == 1.0, "soft variant must clamp to 1");

  for (auto bad : {std::pair{0.0, 5.0}, {-1.0, 5.0}, {10.0, -0.1}}) {
    bool threw = false;
    try {
      (void)spl(1, bad.first, bad.second);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    c.expect(threw, "spl accepted an invalid input");
  }

  Rng rng(0x5137ULL);
  for (int trial = 0; trial < 1000; ++trial) {
    const double shortest = rng.next_uniform(0.1, 30.0);
    const double traveled = rng.next_uniform(0.0, 60.0);
    const int success = rng.next_double() < 0.5 ? 1 : 0;
    const double hard = spl(success, shortest, traveled);
    const double soft = soft_spl(shortest, traveled);
    c.expect(hard <= soft, "spl exceeded soft_spl");
    if (success == 1) c.expect(hard == soft, "successful spl differs from soft_spl");
    if (success == 0) c.expect(hard == 0.0, "failed spl nonzero");
  }
}

// ---------------------------------------------------------------------------
// 8. CLI determinism across worker counts, byte for byte.

int run_cli(const std::string& command) {
  const int status = std::system((command + " >/dev/null").c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion_cli_determinism(Check& c, const std::string& cli) {
  if (cli.empty()) {
    c.expect(false, "no CLI binary path given (pass it as argv[1])");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "echonav-acceptance";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);

  const std::string map = (dir / "maps" / "map_000.txt").string();
  const std::string episodes = (dir / "episodes.jsonl").string();
  const std::vector<std::string> steps = {
      cli + " gen-maps --out " + (dir / "maps").string() +
          " --count 1 --seed 5 --width 32 --height 32 --rooms 4",
      cli + " gen-episodes --map " + map + " --count 24 --seed 9 --out " + dir.string(),
      cli + " calibrate --map " + map + " --samples 100 --seed 11 --out " + dir.string(),
  };
  for (const std::string& step : steps) {
    const int rc = run_cli(step);
    c.expect(rc == 0, "setup step exited " + std::to_string(rc));
    if (rc != 0) return;
  }

  const std::string common = cli + " evaluate --map " + map + " --episodes " + episodes +
                             " --prior " + (dir / "prior.json").string() +
                             " --sigma 0.4,0.3,0.2,0.1,0.3 --noise-seed 11";
  for (auto [workers, sub] : {std::pair{1, "w1"}, {3, "w3"}}) {
    const int rc = run_cli(common + " --workers " + std::to_string(workers) + " --out " +
                           (dir / sub).string());
    c.expect(rc == 0, std::string("evaluate (") + sub + ") exited " + std::to_string(rc));
    if (rc != 0) return;
  }

  for (const char* name : {"results.csv", "aggregate.csv"}) {
    const std::string a = slurp(dir / "w1" / name);
    const std::string b = slurp(dir / "w3" / name);
    c.expect(!a.empty(), std::string(name) + " missing or empty");
    c.expect(a == b, std::string(name) + " differs between worker counts");
  }
  fs::remove_all(dir, ec);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  struct Criterion {
    const char* label;
    double budget_s;  // 0 = no budget
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"band selection worked examples and limit properties", 1.0, criterion_band_selection},
      {"marching distances vs 16-connected reference, 50 maps", 30.0, criterion_distance_accuracy},
      {"echo reciprocity, mirror reference, pressure decay", 10.0, criterion_acoustics},
      {"noise-free navigation success over 200 episodes", 300.0, criterion_navigation},
      {"strategy error ordering under band noise", 300.0, criterion_strategy_ordering},
      {"calibration recovers the injected noise ordering", 120.0, criterion_calibration_ordering},
      {"path-efficiency metric formulas", 0.0, criterion_metrics},
      {"evaluate CLI byte-identical across worker counts", 0.0,
       [&cli](Check& c) { criterion_cli_determinism(c, cli); }},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    criteria[i].run(check);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].budget_s > 0.0 && elapsed > criteria[i].budget_s) {
      check.expect(false, "exceeded " + fmt("%.0f", criteria[i].budget_s) + " s budget");
    }
    std::printf("[%s] criterion %zu: %s (%.1f s)%s%s\n", check.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].label, elapsed, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failed;
  }

  if (failed == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("acceptance: %d of %zu criteria FAILED\n", failed, criteria.size());
  return 1;
}
