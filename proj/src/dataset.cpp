// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/dataset.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "beamkit/error.hpp"
#include "beamkit/io/documents.hpp"
#include "beamkit/io/wav.hpp"
#include "beamkit/source_synth.hpp"

namespace beamkit {

namespace {

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> FromPool(const std::vector<std::vector<double>>& pool, std::size_t pick,
                             std::size_t offset, std::size_t n) {
  const auto& clip = pool[pick % pool.size()];
  BEAMKIT_REQUIRE(!clip.empty(), ErrorCode::kInvalidInput, "empty speech clip");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = clip[(offset + i) % clip.size()];
  return out;
}

std::string ExampleId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ex%04zu", index);
  return buf;
}

}  // namespace

std::string ToString(Task task) {
  switch (task) {
    case Task::kEnh2Noise3: return "enh2noise3";
    case Task::kSep2: return "sep2";
    case Task::kSep3: return "sep3";
  }
  return "?";
}

Task ParseTask(const std::string& name) {
  for (Task t : {Task::kEnh2Noise3, Task::kSep2, Task::kSep3}) {
    if (ToString(t) == name) return t;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown task '" + name + "'");
}

TaskLayout LayoutOf(Task task) {
  switch (task) {
    case Task::kEnh2Noise3: return {4, 2, false};
    case Task::kSep2: return {2, 2, true};
    case Task::kSep3: return {3, 3, true};
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown task");
}

std::uint64_t ExampleSeed(std::uint64_t dataset_seed, std::size_t index) {
  return Mix(dataset_seed ^ Mix(static_cast<std::uint64_t>(index) + 1));
}

Example SimulateExample(const DatasetOptions& options, std::size_t index) {
  BEAMKIT_REQUIRE(options.duration_s > 0.0 && options.sample_rate > 0, ErrorCode::kInvalidConfig,
                  "duration and sample rate must be positive");
  const TaskLayout layout = LayoutOf(options.task);
  std::mt19937_64 rng(ExampleSeed(options.seed, index));

  Example ex;
  ex.id = ExampleId(index);
  ex.task = options.task;
  ex.scene = SampleScene(rng, layout.emitters, options.mic_subset);
  ex.scene.sample_rate = options.sample_rate;

  const auto n = static_cast<std::size_t>(std::lround(options.duration_s * options.sample_rate));
  MultichannelWaveform dry(layout.emitters, n, options.sample_rate);
  for (std::size_t s = 0; s < layout.emitters; ++s) {
    const bool speech = options.task != Task::kEnh2Noise3 || s == 0;
    std::vector<double> sig;
    if (speech && !options.speech_pool.empty()) {
      const std::size_t pick = static_cast<std::size_t>(rng() % options.speech_pool.size());
      const std::size_t offset = static_cast<std::size_t>(rng() % (1u << 20));
      sig = FromPool(options.speech_pool, pick, offset, n);
    } else if (speech) {
      sig = SynthesizeSpeechLike(rng, n, options.sample_rate);
    } else {
      sig = SynthesizeNoiseBursts(rng, n, options.sample_rate);
    }
    std::copy(sig.begin(), sig.end(), dry.channel(s).begin());
  }

  const std::vector<double> snr = DrawSnrs(rng, layout.emitters);
  RenderedMixture rendered = RenderMixture(ex.scene, dry, snr, nullptr, options.rir);
  ex.mixture = std::move(rendered.mixture);
  if (options.task == Task::kEnh2Noise3) {
    ex.images.push_back(std::move(rendered.images[0]));
    MultichannelWaveform noise = rendered.images[1];
    for (std::size_t s = 2; s < rendered.images.size(); ++s) {
      for (std::size_t i = 0; i < noise.samples().size(); ++i) {
        noise.samples()[i] += rendered.images[s].samples()[i];
      }
    }
    ex.images.push_back(std::move(noise));
  } else {
    ex.images = std::move(rendered.images);
  }
  return ex;
}

void ParallelForEach(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < jobs; ++j) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

Manifest SimulateDataset(const DatasetOptions& options, const std::filesystem::path& out_dir,
                         std::size_t jobs) {
  BEAMKIT_REQUIRE(options.num_examples >= 1, ErrorCode::kInvalidConfig, "need at least one example");
  const std::filesystem::path root = std::filesystem::absolute(out_dir).lexically_normal();
  std::filesystem::create_directories(root);
  Manifest manifest;
  manifest.examples.resize(options.num_examples);
  ParallelForEach(options.num_examples, jobs, [&](std::size_t i) {
    const Example ex = SimulateExample(options, i);
    const auto dir = root / ex.id;
    std::filesystem::create_directories(dir);
    ManifestEntry entry;
    entry.id = ex.id;
    entry.task = ToString(ex.task);
    entry.mixture = dir / "mixture.wav";
    WriteWav(entry.mixture, ex.mixture, WavEncoding::kFloat32);
    for (std::size_t s = 0; s < ex.images.size(); ++s) {
      entry.images.push_back(dir / ("image_" + std::to_string(s + 1) + ".wav"));
      WriteWav(entry.images.back(), ex.images[s], WavEncoding::kFloat32);
    }
    entry.scene = dir / "scene.json";
    WriteJsonFile(entry.scene, ToJson(ex.scene));
    manifest.examples[i] = std::move(entry);
  });
  WriteJsonFile(root / "manifest.json", ToJson(manifest, root));
  return manifest;
}

Example LoadExample(const ManifestEntry& entry) {
  Example ex;
  ex.id = entry.id;
  ex.task = ParseTask(entry.task);
  ex.scene = ReadScene(entry.scene);
  ex.mixture = ReadWav(entry.mixture);
  for (const auto& p : entry.images) {
    ex.images.push_back(ReadWav(p));
    BEAMKIT_REQUIRE(ex.images.back().sample_rate() == ex.mixture.sample_rate() &&
                        ex.images.back().length() == ex.mixture.length() &&
                        ex.images.back().channels() == ex.mixture.channels(),
                    ErrorCode::kInvalidInput, "image " + p.string() + " does not match the mixture");
  }
  BEAMKIT_REQUIRE(ex.images.size() == LayoutOf(ex.task).targets, ErrorCode::kInvalidInput,
                  "wrong number of images for task " + entry.task);
  BEAMKIT_REQUIRE(ex.scene.mics.size() == ex.mixture.channels(), ErrorCode::kInvalidInput,
                  "scene and mixture disagree on the number of microphones");
  return ex;
}

}  // namespace beamkit
