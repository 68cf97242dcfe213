// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Shoebox image-method room simulation with banded wall reflectivities,
// perturbed image positions, and mixture rendering.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "beamkit/signal_types.hpp"

namespace beamkit {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const Vec3&) const = default;
};

double Distance(const Vec3& a, const Vec3& b);

inline constexpr double kSpeedOfSound = 343.0;
inline constexpr double kCubeSide = 0.20;
inline constexpr double kWallMargin = 0.1;
inline constexpr std::size_t kNumBands = 3;        // <500 Hz, 500 Hz - 2 kHz, >2 kHz
inline constexpr std::size_t kNumSurfaces = 6;     // x=0, x=W, y=0, y=L, z=0, z=H

struct RoomScene {
  double width = 5.0;   // x extent
  double length = 6.0;  // y extent
  double height = 2.5;  // z extent
  // Pressure reflection coefficient per surface and band.
  std::array<std::array<double, kNumBands>, kNumSurfaces> reflectivity{};
  Vec3 array_center;
  // Cube vertex id of each microphone in `mics` (bit 0: +x, bit 1: +y, bit 2: +z).
  std::vector<std::size_t> mic_vertices;
  std::vector<Vec3> mics;
  std::vector<Vec3> sources;
  std::uint64_t seed = 0;
  int sample_rate = 16000;

  // Throws kInvalidGeometry unless everything sits inside the room with the
  // wall margin.
  void Validate() const;
};

// Cube vertex ids used for 1, 2, 4 and 8 microphone setups.
std::vector<std::size_t> MicSubsetVertices(std::size_t mic_subset);
Vec3 CubeVertex(const Vec3& center, std::size_t vertex);

// Uniform room size, random array/source placement (rejection sampled),
// reflectivities uniform in [0.6, 0.95] per surface and band.
RoomScene SampleScene(std::mt19937_64& rng, std::size_t n_sources, std::size_t mic_subset);

struct Rir {
  std::vector<double> taps;
  int sample_rate = 16000;
  int max_order = 0;
  // taps[k] describes time (k - lead) / sample_rate; the lead holds the
  // acausal half of the interpolation and band filters.
  std::size_t lead = 0;
};

struct RirOptions {
  // nullopt: smallest order whose image level falls 60 dB below the direct
  // path, capped at 20.
  std::optional<int> max_order;
  double perturb = 0.08;
};

int DefaultMaxOrder(const RoomScene& scene, std::size_t source_index, std::size_t mic_index);

Rir ImageMethodRir(const RoomScene& scene, std::size_t source_index, std::size_t mic_index,
                   const RirOptions& options = {});

// Measured direct-path arrival in samples after the lead: the first local
// magnitude maximum at or after the first tap reaching a quarter of the peak.
// Returns -1 for an all-zero response.
std::ptrdiff_t FirstArrival(const Rir& rir);

struct RenderedMixture {
  MultichannelWaveform mixture;
  // One M-channel reverberant image per source.
  std::vector<MultichannelWaveform> images;
  std::vector<double> source_gains;
};

// SNRs (dB) of sources 2..S relative to source 1: 0 for source 1, N(0, 7)
// for the others.
std::vector<double> DrawSnrs(std::mt19937_64& rng, std::size_t n_sources);

// Convolves each source (one per channel of `sources`) with its RIRs,
// rescales sources 2..S so the reference-channel image power ratio matches
// `snr_db`, and sums. `rirs[s][m]` may be supplied to skip simulation.
RenderedMixture RenderMixture(const RoomScene& scene, const MultichannelWaveform& sources,
                              const std::vector<double>& snr_db,
                              const std::vector<std::vector<Rir>>* rirs = nullptr,
                              const RirOptions& options = {});

// Linear convolution truncated to x.size() samples, with h's first `lead`
// taps treated as negative time.
std::vector<double> ConvolveTruncated(std::span<const double> x, std::span<const double> h,
                                      std::size_t lead);

}  // namespace beamkit
