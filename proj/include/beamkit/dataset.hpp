// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Desk-scale simulated evaluation sets.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "beamkit/roomsim.hpp"
#include "beamkit/signal_types.hpp"

namespace beamkit {

enum class Task { kEnh2Noise3, kSep2, kSep3 };

std::string ToString(Task task);
Task ParseTask(const std::string& name);

struct TaskLayout {
  std::size_t emitters;  // dry sources placed in the room
  std::size_t targets;   // estimated outputs
  bool permutation_invariant;
};
TaskLayout LayoutOf(Task task);

struct DatasetOptions {
  Task task = Task::kSep2;
  std::size_t num_examples = 20;
  std::uint64_t seed = 0;
  std::size_t mic_subset = 8;
  double duration_s = 10.0;
  int sample_rate = 16000;
  RirOptions rir;
  // Optional recorded speech (mono, sample_rate) used instead of the
  // synthetic speech stand-in; cycled and cropped to the duration.
  std::vector<std::vector<double>> speech_pool;
};

struct Example {
  std::string id;
  Task task = Task::kSep2;
  RoomScene scene;
  MultichannelWaveform mixture;
  // One M-channel reverberant image per target.
  std::vector<MultichannelWaveform> images;
};

// Seed of example `index` derived from the dataset seed.
std::uint64_t ExampleSeed(std::uint64_t dataset_seed, std::size_t index);

Example SimulateExample(const DatasetOptions& options, std::size_t index);

struct ManifestEntry {
  std::string id;
  std::string task;
  std::filesystem::path mixture;
  std::vector<std::filesystem::path> images;
  std::filesystem::path scene;
};

struct Manifest {
  std::vector<ManifestEntry> examples;
};

// Writes WAVs, scene documents and manifest.json under `out_dir`; `jobs`
// examples are simulated concurrently. Returns the manifest with absolute
// paths.
Manifest SimulateDataset(const DatasetOptions& options, const std::filesystem::path& out_dir,
                         std::size_t jobs = 1);

// Loads one manifest entry back into memory.
Example LoadExample(const ManifestEntry& entry);

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception
// is rethrown after all workers finish.
void ParallelForEach(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace beamkit
