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

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "echonav/fmm.hpp"
#include "echonav/geometry.hpp"
#include "echonav/grid.hpp"

namespace echonav {

inline constexpr double kSpeedOfSound = 343.0;  // m/s
// Distances below this stop amplifying 1/d, so a receiver sitting on the
// source hears a finite pressure of 1/0.1 = 10.
inline constexpr double kNearFieldClamp = 0.1;  // meters

inline constexpr int kFieldSize = 9;             // field edge length, cells
inline constexpr double kFieldResolution = 0.5;  // meters per field cell

/// Per-band absorption for grid worlds unless overridden. Low bands absorb
/// more so bands stay distinguishable at range; a tuning default, nothing
/// physical.
inline constexpr std::array<double, 5> kDefaultAbsorption = {0.92, 0.94, 0.96,
                                                             0.97, 0.98};

/// Energy per frequency band.
struct BandSpectrum {
  std::vector<double> energies;

  /// Every entry finite and >= 0, at least one > 0.
  bool valid() const;
};

struct Tap {
  double delay = 0.0;  // seconds
  double amplitude = 0.0;
};

/// Taps sorted by strictly increasing delay; coincident arrivals superpose
/// into one tap.
struct ImpulseResponse {
  std::vector<Tap> taps;
};

/// Empty rectangular room spanning [0, width] x [0, height] with
/// frequency-dependent wall reflectivity.
struct RoomSpec {
  double width = 0.0;
  double height = 0.0;
  std::vector<double> reflection;  // per band, each in [0, 1)
};

/// Square, world-axis-aligned pressure map centered on a receiver. Row index
/// grows with world y, column index with world x; values are row-major.
struct AcousticField {
  static constexpr int kAllBands = -1;

  int size = kFieldSize;
  double resolution = kFieldResolution;
  Vec2 center;  // world position of the center cell
  int band = kAllBands;
  std::vector<double> values;

  double at(int row, int col) const {
    return values[static_cast<size_t>(row) * size + col];
  }
  Vec2 cell_world(int row, int col) const {
    const int half = size / 2;
    return {center.x + (col - half) * resolution,
            center.y + (row - half) * resolution};
  }
};

/// Propagation environment: an occupancy grid with geodesic attenuation, or
/// an empty rectangular room with an image-source model. Copies share the
/// per-source distance-field cache; queries are thread-safe.
class AcousticEnv {
 public:
  static AcousticEnv grid_world(OccupancyGrid grid);
  static AcousticEnv grid_world(OccupancyGrid grid,
                                std::vector<double> absorption);
  static AcousticEnv shoebox(RoomSpec room, int max_order);

  int band_count() const;
  bool is_grid() const { return grid_.has_value(); }
  /// Throws std::logic_error on room environments.
  const OccupancyGrid& grid() const;

  /// Pointwise pressure at `rcv`. Receivers outside the world or room, or on
  /// occupied/unreachable cells, hear silence (0); a receiver exactly on the
  /// source hears the clamped near-field pressure. Throws
  /// std::invalid_argument when the source sits on an occupied cell.
  double pressure(Vec2 source, Vec2 rcv, int band) const;

 private:
  struct FieldCache;

  AcousticEnv() = default;

  const DistanceField& field_from(Cell source) const;

  std::optional<OccupancyGrid> grid_;
  std::optional<NavMask> mask_;
  std::vector<double> absorption_;
  std::optional<RoomSpec> room_;
  int max_order_ = 0;
  std::shared_ptr<FieldCache> cache_;
};

/// One tap per mirror image reachable with at most `max_order` wall
/// reflections: amplitude reflection^bounces / max(d, 0.1), delay d/c.
/// Swapping src and rcv returns a bit-identical response. Throws
/// std::invalid_argument on src == rcv ("coincident source/receiver") or
/// points not strictly inside the room.
ImpulseResponse image_source_rir(const RoomSpec& room, Vec2 src, Vec2 rcv,
                                 int max_order, int band);

/// Max |amplitude| over taps; throws std::invalid_argument on an empty
/// response.
double pressure_from_rir(const ImpulseResponse& ir);

/// absorption^d / max(d, 0.1) with d the geodesic distance between the cells
/// holding source and rcv; 0 when rcv is unreachable or outside the world.
/// absorption must lie in (0, 1]. Throws when the source cell is occupied.
double geodesic_pressure(const OccupancyGrid& grid, Vec2 source, Vec2 rcv,
                         double absorption);

/// size x size field at kFieldResolution pitch centered exactly on
/// `receiver`; the center cell is the pointwise pressure at the receiver,
/// bit for bit. Cells whose centers fall outside or on occupied space are 0.
AcousticField compute_field(const AcousticEnv& env, Vec2 source, Vec2 receiver,
                            int band, int size = kFieldSize);

/// Received band energies: source energy times squared pressure, per band.
BandSpectrum received_band_energies(const AcousticEnv& env, Vec2 source,
                                    const BandSpectrum& spectrum, Vec2 receiver);

/// Center-preserving subsample: keeps every (size/target)-th cell so the
/// center cell of the result is the center cell of the input.
AcousticField downsample_field(const AcousticField& field, int target_size);

}  // namespace echonav
