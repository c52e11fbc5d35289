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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "echonav/afp.hpp"
#include "echonav/agent.hpp"
#include "echonav/episodes.hpp"
#include "echonav/eval.hpp"
#include "echonav/fmm.hpp"
#include "echonav/io.hpp"
#include "echonav/mapgen.hpp"
#include "echonav/render.hpp"
#include "echonav/rng.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace echonav;

namespace {

/// Bad invocations discovered after flag parsing (exit 1, like CLI11's own
/// parse errors); everything else thrown by a command is a runtime failure
/// (exit 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void append_config_value(std::vector<std::string>& args, const std::string& key,
                         const nlohmann::json& val) {
  const std::string flag = "--" + key;
  if (val.is_boolean()) {
    if (val.get<bool>()) args.push_back(flag);
  } else if (val.is_string()) {
    args.push_back(flag);
    args.push_back(val.get<std::string>());
  } else if (val.is_number()) {
    args.push_back(flag);
    args.push_back(val.dump());
  } else if (val.is_array()) {
    std::string joined;
    for (const auto& item : val) {
      if (!item.is_number()) {
        throw UsageError("config: key '" + key + "' has a non-numeric array element");
      }
      if (!joined.empty()) joined += ',';
      joined += item.dump();
    }
    args.push_back(flag);
    args.push_back(joined);
  } else {
    throw UsageError("config: key '" + key + "' has an unsupported value type");
  }
}

/// Turns a config file (JSON object or key=value lines) into a flag list.
std::vector<std::string> config_to_args(const std::string& text) {
  std::vector<std::string> args;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    if (!obj.is_object()) throw UsageError("config: top level must be an object");
    for (const auto& [key, val] : obj.items()) append_config_value(args, key, val);
    return args;
  }
  size_t begin = 0;
  while (begin <= text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(begin, end - begin);
    begin = end + 1;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) {
      if (begin > text.size()) break;
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      args.push_back("--" + line);
    } else {
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty()) throw UsageError("config: line with empty key");
      if (val == "false") continue;
      args.push_back("--" + key);
      if (val != "true") args.push_back(val);
    }
    if (begin > text.size()) break;
  }
  return args;
}

/// Strips --config from argv and splices the file's flags in right after the
/// subcommand name, so explicit command-line flags override the file (last
/// occurrence wins).
std::vector<std::string> assemble_args(int argc, char** argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);
  std::optional<std::string> config_path;
  std::vector<std::string> kept;
  std::optional<size_t> subcommand_at;  // index into `kept`
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--config") {
      if (i + 1 >= raw.size()) throw UsageError("--config needs a file path");
      config_path = raw[++i];
      continue;
    }
    if (raw[i].rfind("--config=", 0) == 0) {
      config_path = raw[i].substr(std::string("--config=").size());
      continue;
    }
    if (!subcommand_at && !raw[i].empty() && raw[i][0] != '-') {
      subcommand_at = kept.size();
    }
    kept.push_back(raw[i]);
  }
  if (!config_path) return kept;
  if (!subcommand_at) throw UsageError("--config given without a subcommand");
  std::string text;
  try {
    text = read_file(*config_path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  const std::vector<std::string> injected = config_to_args(text);
  kept.insert(kept.begin() + static_cast<long>(*subcommand_at) + 1,
              injected.begin(), injected.end());
  return kept;
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  if (trim(csv).empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(trim(item), &used));
      if (used != trim(item).size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string valid_strategy_names() {
  std::string names;
  for (int i = 0; i <= static_cast<int>(Strategy::kDirectionFollower); ++i) {
    if (!names.empty()) names += ", ";
    names += strategy_name(static_cast<Strategy>(i));
  }
  return names;
}

std::vector<Strategy> parse_strategy_list(const std::string& csv) {
  std::vector<Strategy> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string name = trim(item);
    if (name.empty()) continue;
    const auto s = parse_strategy(name);
    if (!s) {
      throw UsageError("unknown strategy '" + name +
                       "'; valid strategies: " + valid_strategy_names());
    }
    out.push_back(*s);
  }
  if (out.empty()) throw UsageError("no strategies given");
  return out;
}

void write_out(const fs::path& dir, const std::string& name,
               const std::string& content) {
  fs::create_directories(dir);
  atomic_write_file(dir / name, content);
  std::cout << "wrote " << (dir / name).string() << "\n";
}

std::string scene_name_for(const fs::path& map_path) {
  return map_path.stem().string();
}

NoiseModel noise_from_flags(int bands, const std::string& sigma_csv,
                            const std::string& epsilon_csv, uint64_t noise_seed) {
  NoiseModel noise = NoiseModel::zero(bands, noise_seed);
  const auto sigma = parse_double_list(sigma_csv, "--sigma");
  const auto epsilon = parse_double_list(epsilon_csv, "--epsilon");
  if (!sigma.empty()) noise.sigma = sigma;
  if (!epsilon.empty()) noise.epsilon = epsilon;
  return noise;
}

// ---------------------------------------------------------------------------
// Subcommand options and bodies.

struct GenMapsOpts {
  std::string out = ".";
  uint64_t seed = 0;
  int count = 1;
  int width = 64;
  int height = 64;
  int rooms = 6;
  int door_cells = 2;
  int min_room = 4;
  double res = 0.5;
};

void run_gen_maps(const GenMapsOpts& o) {
  if (o.count < 1) throw UsageError("--count must be at least 1");
  for (int i = 0; i < o.count; ++i) {
    MapGenParams params;
    params.width = o.width;
    params.height = o.height;
    params.resolution = o.res;
    params.rooms = o.rooms;
    params.door_cells = o.door_cells;
    params.min_room = o.min_room;
    params.seed = o.seed + static_cast<uint64_t>(i);
    const OccupancyGrid grid = generate_map(params);
    char name[32];
    std::snprintf(name, sizeof(name), "map_%03d.txt", i);
    write_out(o.out, name, grid.to_ascii());
  }
}

struct GenEpisodesOpts {
  std::string map;
  std::string scene;
  std::string out = ".";
  std::string spectra = "library";
  uint64_t seed = 0;
  int count = 100;
  int bands = 5;
  int id_base = 0;
  double min_geodesic = 1.5;
  double max_geodesic = 30.0;
};

void run_gen_episodes(const GenEpisodesOpts& o) {
  const OccupancyGrid grid = OccupancyGrid::load(o.map);
  const std::string scene = o.scene.empty() ? scene_name_for(o.map) : o.scene;
  EpisodeConstraints constraints;
  constraints.min_geodesic = o.min_geodesic;
  constraints.max_geodesic = o.max_geodesic;
  std::vector<BandSpectrum> library;
  if (o.spectra == "flat") {
    library = {BandSpectrum{std::vector<double>(static_cast<size_t>(o.bands), 1.0)}};
  } else if (o.spectra == "library") {
    library = default_spectrum_library(o.bands);
  } else {
    throw UsageError("--spectra must be 'library' or 'flat'");
  }
  const auto episodes = generate_episodes(grid, scene, o.count, o.seed, constraints,
                                          library, o.id_base);
  write_out(o.out, "episodes.jsonl", episodes_to_jsonl(episodes));
}

struct CurateOpts {
  std::string map;
  std::string episodes;
  std::string out = ".";
  int field_size = kFieldSize;
  int stride = 4;
};

void run_curate(const CurateOpts& o) {
  const OccupancyGrid grid = OccupancyGrid::load(o.map);
  const AcousticEnv env = AcousticEnv::grid_world(grid);
  const auto episodes = episodes_from_jsonl(read_file(o.episodes));
  write_out(o.out, "dataset.csv",
            curate_field_dataset(env, episodes, o.field_size, o.stride));
}

struct CalibrateOpts {
  std::string map;
  std::string episodes;
  std::string out = ".";
  std::string sigma;
  std::string epsilon;
  uint64_t seed = 0;
  uint64_t noise_seed = 0;
  int samples = 500;
  int bands = 5;
  double alpha = 5.0;
  double beta = 0.8;
};

void run_calibrate(const CalibrateOpts& o) {
  const OccupancyGrid grid = OccupancyGrid::load(o.map);
  const AcousticEnv env = AcousticEnv::grid_world(grid);
  const BandSpectrum flat{std::vector<double>(static_cast<size_t>(o.bands), 1.0)};

  std::vector<CalibrationSample> samples;
  if (!o.episodes.empty()) {
    for (const Episode& e : episodes_from_jsonl(read_file(o.episodes))) {
      samples.push_back(CalibrationSample{&env, e.goal, e.spectrum,
                                          e.start.position()});
    }
  } else {
    if (o.samples < 1) throw UsageError("--samples must be at least 1");
    std::vector<Vec2> centers;
    for (int y = 0; y < grid.height(); ++y) {
      for (int x = 0; x < grid.width(); ++x) {
        if (!grid.occupied(Cell{x, y})) centers.push_back(grid.cell_center(Cell{x, y}));
      }
    }
    if (centers.size() < 2) throw std::runtime_error("map has fewer than two free cells");
    Rng rng(o.seed);
    for (int i = 0; i < o.samples; ++i) {
      const size_t src = rng.next_below(centers.size());
      size_t rcv = src;
      while (rcv == src) rcv = rng.next_below(centers.size());
      samples.push_back(CalibrationSample{&env, centers[src], flat, centers[rcv]});
    }
  }

  const NoiseModel noise = noise_from_flags(o.bands, o.sigma, o.epsilon, o.noise_seed);
  CalibrationReport report;
  const BandErrorPrior prior =
      calibrate_band_errors(samples, noise, o.alpha, o.beta, &report);
  write_out(o.out, "prior.json", prior_to_json(prior));
  write_out(o.out, "calibration.csv", calibration_report_csv(report));
}

struct EvaluateOpts {
  std::string map;
  std::string scene;
  std::string episodes;
  std::string prior;
  std::string strategies = "oracle,all_freq,best_freq,highest_energy,freq_adaptive";
  std::string sigma;
  std::string epsilon;
  std::string out = ".";
  uint64_t noise_seed = 0;
  int workers = 1;
  int bands = 5;
  int max_steps = 500;
  int field_size = kFieldSize;
  double success_radius = 1.0;
  double alpha = 5.0;
  double beta = 0.8;
  bool alpha_set = false;
  bool beta_set = false;
  int trace_episode = -1;
  std::string trace_strategy = "oracle";
};

void run_evaluate(const EvaluateOpts& o) {
  const std::vector<Strategy> strategies = parse_strategy_list(o.strategies);
  const auto trace_strategy = parse_strategy(o.trace_strategy);
  if (!trace_strategy) {
    throw UsageError("unknown strategy '" + o.trace_strategy +
                     "'; valid strategies: " + valid_strategy_names());
  }

  const OccupancyGrid grid = OccupancyGrid::load(o.map);
  const std::string scene = o.scene.empty() ? scene_name_for(o.map) : o.scene;
  std::map<std::string, AcousticEnv> envs;
  envs.emplace(scene, AcousticEnv::grid_world(grid));
  const auto episodes = episodes_from_jsonl(read_file(o.episodes));

  BandErrorPrior prior;
  if (!o.prior.empty()) {
    prior = prior_from_json(read_file(o.prior));
    if (o.alpha_set) prior.alpha = o.alpha;
    if (o.beta_set) prior.beta = o.beta;
  } else {
    prior.errors.assign(static_cast<size_t>(o.bands), 1.0);
    prior.alpha = o.alpha;
    prior.beta = o.beta;
  }

  const NoiseModel noise = noise_from_flags(o.bands, o.sigma, o.epsilon, o.noise_seed);

  EvalOptions options;
  options.strategies = strategies;
  options.workers = o.workers;
  options.nav.max_steps = o.max_steps;
  options.nav.success_radius = o.success_radius;
  options.nav.field_size = o.field_size;

  const EvalReport report = evaluate(envs, episodes, noise, prior, options);
  write_out(o.out, "results.csv", results_csv(report));
  write_out(o.out, "aggregate.csv", aggregate_csv(report));

  if (o.trace_episode >= 0) {
    const auto it = std::find_if(episodes.begin(), episodes.end(), [&](const Episode& e) {
      return e.episode_id == o.trace_episode;
    });
    if (it == episodes.end()) {
      throw std::runtime_error("trace episode " + std::to_string(o.trace_episode) +
                               " is not in the episode file");
    }
    std::ostringstream log;
    NavConfig nav = options.nav;
    nav.trajectory_log = &log;
    run_episode(envs.at(scene), *it, *trace_strategy, noise, prior, nav);
    write_out(o.out, "trajectory.jsonl", log.str());
  }
}

struct RenderOpts {
  std::string map;
  std::string log;
  std::string dataset;
  std::string out = ".";
  int limit = 0;
};

void run_render(const RenderOpts& o) {
  if (o.log.empty() && o.dataset.empty()) {
    throw UsageError("render needs --log and/or --dataset");
  }
  if (!o.log.empty()) {
    if (o.map.empty()) throw UsageError("--log needs --map to draw on");
    const OccupancyGrid grid = OccupancyGrid::load(o.map);
    const TrajectoryTrace trace = trajectory_from_jsonl(read_file(o.log));
    write_out(o.out, "trajectory.txt", render_trajectory(grid, trace));
  }
  if (!o.dataset.empty()) {
    const std::string text = read_file(o.dataset);
    const auto lines = split_lines(text);
    if (lines.empty()) throw std::runtime_error("dataset is empty");
    const auto header = split_csv_row(lines[0]);
    if (header.size() < 7 || header[0] != "scene") {
      throw std::runtime_error("dataset header is not a curated field table");
    }
    const int cells = static_cast<int>(header.size()) - 6;
    const int size = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
    if (size * size != cells) {
      throw std::runtime_error("dataset rows do not hold a square field");
    }
    int written = 0;
    for (size_t row = 1; row < lines.size(); ++row) {
      if (trim(lines[row]).empty()) continue;
      if (o.limit > 0 && written >= o.limit) break;
      const auto cols = split_csv_row(lines[row]);
      if (cols.size() != header.size()) {
        throw std::runtime_error("dataset row " + std::to_string(row) +
                                 " has the wrong column count");
      }
      AcousticField field;
      field.size = size;
      field.band = std::stoi(cols[5]);
      field.center = Vec2{std::stod(cols[3]), std::stod(cols[4])};
      field.values.reserve(static_cast<size_t>(cells));
      for (int i = 0; i < cells; ++i) {
        field.values.push_back(std::stod(cols[static_cast<size_t>(i) + 6]));
      }
      char name[32];
      std::snprintf(name, sizeof(name), "field_%04d.pgm", written);
      write_out(o.out, name, field_to_pgm(field));
      ++written;
    }
  }
}

struct DistanceFieldOpts {
  std::string map;
  std::string out = ".";
  double src_x = 0.0;
  double src_y = 0.0;
};

void run_distance_field(const DistanceFieldOpts& o) {
  const OccupancyGrid grid = OccupancyGrid::load(o.map);
  const Vec2 src{o.src_x, o.src_y};
  if (!grid.point_free(src)) {
    throw std::runtime_error("source point is not on a free cell");
  }
  const DistanceField dist =
      fmm_solve(NavMask::from_grid(grid), grid.world_to_cell(src));
  std::string csv;
  for (int y = grid.height() - 1; y >= 0; --y) {  // north row first, like the maps
    for (int x = 0; x < grid.width(); ++x) {
      if (x > 0) csv += ',';
      csv += format_double(dist.at(Cell{x, y}));
    }
    csv += '\n';
  }
  write_out(o.out, "distance_field.csv", csv);
}

void take_last_everywhere(CLI::App* app) {
  for (CLI::Option* opt : app->get_options()) {
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
  for (CLI::App* sub : app->get_subcommands({})) take_last_everywhere(sub);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic-field navigation toolkit"};
  app.require_subcommand(1);

  GenMapsOpts gm;
  CLI::App* gen_maps = app.add_subcommand("gen-maps", "Generate procedural multi-room maps");
  gen_maps->add_option("--out", gm.out, "Output directory");
  gen_maps->add_option("--seed", gm.seed, "Base seed; map i uses seed+i");
  gen_maps->add_option("--count", gm.count, "Number of maps");
  gen_maps->add_option("--width", gm.width, "Map width in cells");
  gen_maps->add_option("--height", gm.height, "Map height in cells");
  gen_maps->add_option("--rooms", gm.rooms, "Rooms per map");
  gen_maps->add_option("--door-cells", gm.door_cells, "Door width in cells");
  gen_maps->add_option("--min-room", gm.min_room, "Smallest room extent in cells");
  gen_maps->add_option("--res", gm.res, "Meters per cell");
  gen_maps->callback([&] { run_gen_maps(gm); });

  GenEpisodesOpts ge;
  CLI::App* gen_episodes = app.add_subcommand("gen-episodes", "Sample navigation episodes on a map");
  gen_episodes->add_option("--map", ge.map, "Map file")->required();
  gen_episodes->add_option("--scene", ge.scene, "Scene name (default: map file stem)");
  gen_episodes->add_option("--out", ge.out, "Output directory");
  gen_episodes->add_option("--seed", ge.seed, "Sampling seed");
  gen_episodes->add_option("--count", ge.count, "Number of episodes");
  gen_episodes->add_option("--bands", ge.bands, "Frequency band count");
  gen_episodes->add_option("--id-base", ge.id_base, "First episode id");
  gen_episodes->add_option("--min-geodesic", ge.min_geodesic, "Shortest allowed start-goal geodesic, m");
  gen_episodes->add_option("--max-geodesic", ge.max_geodesic, "Longest allowed start-goal geodesic, m");
  gen_episodes->add_option("--spectra", ge.spectra, "'library' (mixed profiles) or 'flat'");
  gen_episodes->callback([&] { run_gen_episodes(ge); });

  CurateOpts cu;
  CLI::App* curate = app.add_subcommand("curate", "Write a field dataset along episode paths");
  curate->add_option("--map", cu.map, "Map file")->required();
  curate->add_option("--episodes", cu.episodes, "Episode JSONL file")->required();
  curate->add_option("--out", cu.out, "Output directory");
  curate->add_option("--field-size", cu.field_size, "Field grid extent, cells");
  curate->add_option("--stride", cu.stride, "Keep every stride-th path cell");
  curate->callback([&] { run_curate(cu); });

  CalibrateOpts ca;
  CLI::App* calibrate = app.add_subcommand("calibrate", "Measure per-band prediction errors");
  calibrate->add_option("--map", ca.map, "Map file")->required();
  calibrate->add_option("--episodes", ca.episodes, "Flat-spectrum episode JSONL (default: sample pairs)");
  calibrate->add_option("--out", ca.out, "Output directory");
  calibrate->add_option("--seed", ca.seed, "Sample-draw seed");
  calibrate->add_option("--samples", ca.samples, "Sample count when drawing pairs");
  calibrate->add_option("--bands", ca.bands, "Frequency band count");
  calibrate->add_option("--sigma", ca.sigma, "Per-band log-normal noise, comma separated");
  calibrate->add_option("--epsilon", ca.epsilon, "Per-band additive noise floor, comma separated");
  calibrate->add_option("--noise-seed", ca.noise_seed, "Noise draw seed");
  calibrate->add_option("--alpha", ca.alpha, "Prior weight exponent");
  calibrate->add_option("--beta", ca.beta, "Energy weight exponent");
  calibrate->callback([&] { run_calibrate(ca); });

  EvaluateOpts ev;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Run strategies over an episode suite");
  evaluate_cmd->add_option("--map", ev.map, "Map file")->required();
  evaluate_cmd->add_option("--scene", ev.scene, "Scene name (default: map file stem)");
  evaluate_cmd->add_option("--episodes", ev.episodes, "Episode JSONL file")->required();
  evaluate_cmd->add_option("--prior", ev.prior, "Band-error prior JSON (default: uniform)");
  evaluate_cmd->add_option("--strategies", ev.strategies, "Comma-separated strategy names");
  evaluate_cmd->add_option("--sigma", ev.sigma, "Per-band log-normal noise, comma separated");
  evaluate_cmd->add_option("--epsilon", ev.epsilon, "Per-band additive noise floor, comma separated");
  evaluate_cmd->add_option("--noise-seed", ev.noise_seed, "Noise draw seed");
  evaluate_cmd->add_option("--out", ev.out, "Output directory");
  evaluate_cmd->add_option("--workers", ev.workers, "Worker thread count");
  evaluate_cmd->add_option("--bands", ev.bands, "Frequency band count");
  evaluate_cmd->add_option("--max-steps", ev.max_steps, "Step budget per episode");
  evaluate_cmd->add_option("--success-radius", ev.success_radius, "Stop-distance for success, m");
  evaluate_cmd->add_option("--field-size", ev.field_size, "Field grid extent, cells");
  CLI::Option* alpha_opt = evaluate_cmd->add_option("--alpha", ev.alpha, "Prior weight exponent");
  CLI::Option* beta_opt = evaluate_cmd->add_option("--beta", ev.beta, "Energy weight exponent");
  evaluate_cmd->add_option("--trace-episode", ev.trace_episode,
                           "Also log this episode's trajectory (JSONL)");
  evaluate_cmd->add_option("--trace-strategy", ev.trace_strategy, "Strategy for the trace");
  evaluate_cmd->callback([&] {
    ev.alpha_set = alpha_opt->count() > 0;
    ev.beta_set = beta_opt->count() > 0;
    run_evaluate(ev);
  });

  RenderOpts re;
  CLI::App* render = app.add_subcommand("render", "Draw trajectory overlays and field heatmaps");
  render->add_option("--map", re.map, "Map file (needed with --log)");
  render->add_option("--log", re.log, "Trajectory JSONL from evaluate --trace-episode");
  render->add_option("--dataset", re.dataset, "Curated field CSV; one PGM per row");
  render->add_option("--out", re.out, "Output directory");
  render->add_option("--limit", re.limit, "Max PGM count (0 = all rows)");
  render->callback([&] { run_render(re); });

  DistanceFieldOpts df;
  CLI::App* distance_field = app.add_subcommand("distance-field", "Geodesic distances from a point, CSV");
  distance_field->add_option("--map", df.map, "Map file")->required();
  distance_field->add_option("--src-x", df.src_x, "Source x, m")->required();
  distance_field->add_option("--src-y", df.src_y, "Source y, m")->required();
  distance_field->add_option("--out", df.out, "Output directory");
  distance_field->callback([&] { run_distance_field(df); });

  take_last_everywhere(&app);

  std::vector<std::string> args;
  try {
    args = assemble_args(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
