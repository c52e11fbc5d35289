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

#include "echonav/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace echonav {
namespace {

struct AxisImage {
  double offset = 0.0;  // image coordinate minus receiver coordinate
  int reflections = 0;
};

// 1D mirror images of s over [0, extent], as offsets from r. Images with an
// even bounce count sit at 2k*extent + s, odd ones at 2k*extent - s. Written
// in terms of s-r and s+r so that swapping s and r only flips signs, which
// floating point negates exactly: the offset magnitudes, and hence the tap
// set, are bit-identical under the swap.
std::vector<AxisImage> axis_images(double extent, double s, double r,
                                   int max_order) {
  std::vector<AxisImage> out;
  const double diff = s - r;
  const double sum = s + r;
  for (int k = -(max_order + 1); k <= max_order + 1; ++k) {
    const double span = 2.0 * k * extent;
    const int even = 2 * std::abs(k);
    if (even <= max_order) out.push_back({span + diff, even});
    const int odd = std::abs(2 * k - 1);
    if (odd <= max_order) out.push_back({span - sum, odd});
  }
  return out;
}

double pressure_from_distance(double d, double absorption) {
  if (std::isinf(d)) return 0.0;  // unreachable: silence
  return std::pow(absorption, d) / std::max(d, kNearFieldClamp);
}

void check_absorption(const std::vector<double>& absorption) {
  if (absorption.empty()) throw std::invalid_argument("absorption profile is empty");
  for (double a : absorption) {
    if (!(a > 0.0) || a > 1.0) {
      throw std::invalid_argument("absorption must lie in (0, 1]");
    }
  }
}

void check_room(const RoomSpec& room) {
  if (!(room.width > 0.0) || !(room.height > 0.0)) {
    throw std::invalid_argument("room must have positive extent");
  }
  if (room.reflection.empty()) {
    throw std::invalid_argument("reflection profile is empty");
  }
  for (double rho : room.reflection) {
    if (!(rho >= 0.0) || rho >= 1.0) {
      throw std::invalid_argument("reflection must lie in [0, 1)");
    }
  }
}

bool strictly_inside(const RoomSpec& room, Vec2 p) {
  return p.x > 0.0 && p.x < room.width && p.y > 0.0 && p.y < room.height;
}

}  // namespace

bool BandSpectrum::valid() const {
  bool positive = false;
  for (double e : energies) {
    if (!std::isfinite(e) || e < 0.0) return false;
    if (e > 0.0) positive = true;
  }
  return positive;
}

ImpulseResponse image_source_rir(const RoomSpec& room, Vec2 src, Vec2 rcv,
                                 int max_order, int band) {
  check_room(room);
  if (band < 0 || band >= static_cast<int>(room.reflection.size())) {
    throw std::invalid_argument("band out of range");
  }
  if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
  if (!strictly_inside(room, src) || !strictly_inside(room, rcv)) {
    throw std::invalid_argument("source and receiver must be strictly inside the room");
  }
  if (src.x == rcv.x && src.y == rcv.y) {
    throw std::invalid_argument("coincident source/receiver");
  }

  const double rho = room.reflection[static_cast<size_t>(band)];
  const auto xs = axis_images(room.width, src.x, rcv.x, max_order);
  const auto ys = axis_images(room.height, src.y, rcv.y, max_order);

  std::vector<Tap> taps;
  taps.reserve(xs.size() * ys.size());
  for (const AxisImage& ix : xs) {
    for (const AxisImage& iy : ys) {
      const int order = ix.reflections + iy.reflections;
      if (order > max_order) continue;
      const double d = std::hypot(ix.offset, iy.offset);
      taps.push_back(
          {d / kSpeedOfSound, std::pow(rho, order) / std::max(d, kNearFieldClamp)});
    }
  }
  // Sort on (delay, amplitude) so superposing equal delays accumulates in a
  // reproducible order.
  std::sort(taps.begin(), taps.end(), [](const Tap& a, const Tap& b) {
    return a.delay != b.delay ? a.delay < b.delay : a.amplitude < b.amplitude;
  });
  ImpulseResponse ir;
  for (const Tap& tap : taps) {
    if (!ir.taps.empty() && ir.taps.back().delay == tap.delay) {
      ir.taps.back().amplitude += tap.amplitude;
    } else {
      ir.taps.push_back(tap);
    }
  }
  return ir;
}

double pressure_from_rir(const ImpulseResponse& ir) {
  if (ir.taps.empty()) throw std::invalid_argument("empty impulse response");
  double peak = 0.0;
  for (const Tap& tap : ir.taps) peak = std::max(peak, std::abs(tap.amplitude));
  return peak;
}

double geodesic_pressure(const OccupancyGrid& grid, Vec2 source, Vec2 rcv,
                         double absorption) {
  check_absorption({absorption});
  const Cell src = grid.world_to_cell(source);
  if (grid.occupied(src)) throw std::invalid_argument("source on occupied cell");
  const auto dst = grid.try_world_to_cell(rcv);
  if (!dst) return 0.0;
  const DistanceField field = fmm_solve(NavMask::from_grid(grid), src);
  return pressure_from_distance(field.at(*dst), absorption);
}

struct AcousticEnv::FieldCache {
  std::mutex mutex;
  std::unordered_map<size_t, std::shared_ptr<const DistanceField>> by_source;
};

AcousticEnv AcousticEnv::grid_world(OccupancyGrid grid) {
  return grid_world(std::move(grid), std::vector<double>(kDefaultAbsorption.begin(),
                                                         kDefaultAbsorption.end()));
}

AcousticEnv AcousticEnv::grid_world(OccupancyGrid grid,
                                    std::vector<double> absorption) {
  check_absorption(absorption);
  AcousticEnv env;
  env.mask_ = NavMask::from_grid(grid);
  env.grid_ = std::move(grid);
  env.absorption_ = std::move(absorption);
  env.cache_ = std::make_shared<FieldCache>();
  return env;
}

AcousticEnv AcousticEnv::shoebox(RoomSpec room, int max_order) {
  check_room(room);
  if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
  AcousticEnv env;
  env.room_ = std::move(room);
  env.max_order_ = max_order;
  return env;
}

int AcousticEnv::band_count() const {
  return grid_ ? static_cast<int>(absorption_.size())
               : static_cast<int>(room_->reflection.size());
}

const OccupancyGrid& AcousticEnv::grid() const {
  if (!grid_) throw std::logic_error("not a grid environment");
  return *grid_;
}

const DistanceField& AcousticEnv::field_from(Cell source) const {
  const size_t key = mask_->index(source);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->by_source.find(key);
  if (it == cache_->by_source.end()) {
    auto field = std::make_shared<const DistanceField>(fmm_solve(*mask_, source));
    it = cache_->by_source.emplace(key, std::move(field)).first;
  }
  return *it->second;
}

double AcousticEnv::pressure(Vec2 source, Vec2 rcv, int band) const {
  if (band < 0 || band >= band_count()) {
    throw std::invalid_argument("band out of range");
  }
  if (grid_) {
    const Cell src = grid_->world_to_cell(source);
    if (grid_->occupied(src)) {
      throw std::invalid_argument("source on occupied cell");
    }
    const auto dst = grid_->try_world_to_cell(rcv);
    if (!dst) return 0.0;
    return pressure_from_distance(field_from(src).at(*dst),
                                  absorption_[static_cast<size_t>(band)]);
  }
  if (!strictly_inside(*room_, rcv)) return 0.0;
  if (rcv.x == source.x && rcv.y == source.y) {
    // A sample exactly on the source hears the clamped direct path, which
    // tops every reflected image.
    return 1.0 / kNearFieldClamp;
  }
  return pressure_from_rir(image_source_rir(*room_, source, rcv, max_order_, band));
}

AcousticField compute_field(const AcousticEnv& env, Vec2 source, Vec2 receiver,
                            int band, int size) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("field size must be odd and >= 3");
  }
  if (env.is_grid() && !env.grid().point_free(receiver)) {
    throw std::invalid_argument("receiver not on a free cell");
  }
  AcousticField field;
  field.size = size;
  field.resolution = kFieldResolution;
  field.center = receiver;
  field.band = band;
  field.values.resize(static_cast<size_t>(size) * size);
  for (int row = 0; row < size; ++row) {
    for (int col = 0; col < size; ++col) {
      field.values[static_cast<size_t>(row) * size + col] =
          env.pressure(source, field.cell_world(row, col), band);
    }
  }
  return field;
}

BandSpectrum received_band_energies(const AcousticEnv& env, Vec2 source,
                                    const BandSpectrum& spectrum, Vec2 receiver) {
  if (static_cast<int>(spectrum.energies.size()) != env.band_count()) {
    throw std::invalid_argument("spectrum band count mismatch");
  }
  if (!spectrum.valid()) throw std::invalid_argument("invalid source spectrum");
  BandSpectrum out;
  out.energies.resize(spectrum.energies.size());
  for (size_t i = 0; i < spectrum.energies.size(); ++i) {
    const double p = env.pressure(source, receiver, static_cast<int>(i));
    out.energies[i] = spectrum.energies[i] * p * p;
  }
  return out;
}

AcousticField downsample_field(const AcousticField& field, int target_size) {
  if (target_size < 3 || target_size % 2 == 0 || target_size > field.size) {
    throw std::invalid_argument("target size must be odd, >= 3 and <= the field size");
  }
  const int step = field.size / target_size;
  const int first = field.size / 2 - step * (target_size / 2);
  AcousticField out;
  out.size = target_size;
  out.resolution = field.resolution * step;
  out.center = field.center;
  out.band = field.band;
  out.values.resize(static_cast<size_t>(target_size) * target_size);
  for (int row = 0; row < target_size; ++row) {
    for (int col = 0; col < target_size; ++col) {
      out.values[static_cast<size_t>(row) * target_size + col] =
          field.at(first + row * step, first + col * step);
    }
  }
  return out;
}

}  // namespace echonav
