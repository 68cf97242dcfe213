// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "beamkit/dataset.hpp"
#include "beamkit/error.hpp"
#include "beamkit/io/documents.hpp"
#include "beamkit/io/wav.hpp"
#include "beamkit/metrics.hpp"
#include "beamkit/pipeline.hpp"
#include "beamkit/sweep.hpp"

namespace beamkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string EstimateFileName(const std::string& id, const std::string& stage, std::size_t source) {
  return id + "_" + stage + "_" + std::to_string(source + 1) + ".wav";
}

MultichannelWaveform ReadEstimates(const fs::path& dir, const std::string& id,
                                   const std::string& stage, std::size_t sources) {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;
  for (std::size_t s = 0; s < sources; ++s) {
    const MultichannelWaveform w = ReadWav(dir / EstimateFileName(id, stage, s));
    BEAMKIT_REQUIRE(w.channels() == 1, ErrorCode::kInvalidInput, "estimate files must be mono");
    BEAMKIT_REQUIRE(s == 0 || w.sample_rate() == sample_rate, ErrorCode::kInvalidInput,
                    "estimate sample rates differ");
    sample_rate = w.sample_rate();
    channels.emplace_back(w.channel(0).begin(), w.channel(0).end());
  }
  return MultichannelWaveform::FromChannels(channels, sample_rate);
}

void WriteEstimates(const fs::path& dir, const std::string& id, const StageOutput& stage) {
  for (std::size_t s = 0; s < stage.estimates.channels(); ++s) {
    WriteWav(dir / EstimateFileName(id, stage.name, s),
             stage.estimates.SelectChannels(std::vector<std::size_t>{s}), WavEncoding::kFloat32);
  }
}

MultichannelWaveform ReferenceImages(const Example& ex, std::size_t ref_channel) {
  BEAMKIT_REQUIRE(ref_channel < ex.mixture.channels(), ErrorCode::kInvalidConfig,
                  "reference channel out of range");
  std::vector<std::vector<double>> refs;
  for (const auto& img : ex.images) {
    refs.emplace_back(img.channel(ref_channel).begin(), img.channel(ref_channel).end());
  }
  return MultichannelWaveform::FromChannels(refs, ex.mixture.sample_rate());
}

// Dispatches each masking stage to the provider configured for it.
class StageRouter : public MaskProvider {
 public:
  StageRouter(std::map<int, MaskProvider*> routes, std::size_t sources)
      : routes_(std::move(routes)), sources_(sources) {}
  std::size_t num_sources() const override { return sources_; }
  MultichannelWaveform Estimate(int stage, std::span<const double> mixture_ref, int sample_rate,
                                const MultichannelWaveform* prior) override {
    return routes_.at(stage)->Estimate(stage, mixture_ref, sample_rate, prior);
  }

 private:
  std::map<int, MaskProvider*> routes_;
  std::size_t sources_;
};

SeparationTrace Separate(const Example& ex, const PipelineConfig& config,
                         const std::optional<fs::path>& external_dir) {
  const std::size_t sources = ex.images.size();
  OracleMaskProvider::Options oracle_options;
  oracle_options.kind = config.oracle_kind;
  oracle_options.stft = StftConfig::Masking(ex.mixture.sample_rate());
  oracle_options.beamformed_phase = config.beamformed_phase;
  std::unique_ptr<OracleMaskProvider> oracle;
  std::unique_ptr<ExternalEstimateProvider> external;
  std::map<int, MultichannelWaveform> external_estimates;
  std::map<int, MaskProvider*> routes;
  for (const auto& stage : config.stages) {
    if (stage.mask_source == MaskSource::kOracle) {
      if (!oracle) {
        oracle = std::make_unique<OracleMaskProvider>(ReferenceImages(ex, stage.ref_channel),
                                                      oracle_options);
      }
      routes[stage.index] = oracle.get();
    } else {
      BEAMKIT_REQUIRE(external_dir.has_value(), ErrorCode::kInvalidConfig,
                      "external mask stages need --external");
      external_estimates[stage.index] =
          ReadEstimates(*external_dir, ex.id, "MN" + std::to_string(stage.index), sources);
    }
  }
  if (!external_estimates.empty()) {
    std::vector<int> stages;
    for (const auto& [i, _] : external_estimates) stages.push_back(i);
    external = std::make_unique<ExternalEstimateProvider>(std::move(external_estimates));
    for (int i : stages) routes[i] = external.get();
  }
  StageRouter router(std::move(routes), sources);
  return RunSequence(ex.mixture, router, config);
}

std::vector<Example> LoadExamples(const Manifest& manifest, std::size_t jobs) {
  std::vector<Example> examples(manifest.examples.size());
  ParallelForEach(examples.size(), jobs,
                  [&](std::size_t i) { examples[i] = LoadExample(manifest.examples[i]); });
  for (const auto& ex : examples) {
    BEAMKIT_REQUIRE(ex.mixture.sample_rate() == examples.front().mixture.sample_rate(),
                    ErrorCode::kInvalidInput, "manifest examples differ in sample rate");
  }
  return examples;
}

// Stage names present for `id` in `dir`, ordered MN1, BF1, MN2, ...
std::vector<std::string> StagesInDirectory(const fs::path& dir, const std::string& id) {
  BEAMKIT_REQUIRE(fs::is_directory(dir), ErrorCode::kIo, "no such directory " + dir.string());
  std::vector<std::pair<int, std::string>> found;
  const std::string prefix = id + "_";
  const std::string suffix = "_1.wav";
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || name.size() <= prefix.size() + suffix.size()) continue;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    const std::string stage = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (stage.size() < 3 || (stage.rfind("MN", 0) != 0 && stage.rfind("BF", 0) != 0)) continue;
    const int index = std::atoi(stage.c_str() + 2);
    found.emplace_back(2 * index + (stage[0] == 'B' ? 1 : 0), stage);
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> stages;
  for (const auto& [_, s] : found) stages.push_back(s);
  return stages;
}

std::uint64_t SeedWithOverride(std::uint64_t seed) {
  if (const char* env = std::getenv("BEAMKIT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      BEAMKIT_REQUIRE(used == std::string(env).size(), ErrorCode::kInvalidConfig, "");
      spdlog::info("BEAMKIT_SEED overrides seed {} with {}", seed, v);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, std::string("BEAMKIT_SEED is not an integer: ") + env);
    }
  }
  return seed;
}

void CommandRir(const fs::path& scene_path, const fs::path& out, std::optional<int> max_order,
                double perturb) {
  const RoomScene scene = ReadScene(scene_path);
  fs::create_directories(out);
  RirOptions options;
  options.max_order = max_order;
  options.perturb = perturb;
  json index = json::array();
  for (std::size_t s = 0; s < scene.sources.size(); ++s) {
    for (std::size_t m = 0; m < scene.mics.size(); ++m) {
      const Rir rir = ImageMethodRir(scene, s, m, options);
      const std::string name =
          "rir_s" + std::to_string(s + 1) + "_m" + std::to_string(m + 1) + ".wav";
      WriteWav(out / name, MultichannelWaveform::FromChannels({rir.taps}, rir.sample_rate),
               WavEncoding::kFloat32);
      index.push_back({{"source", s + 1},
                       {"mic", m + 1},
                       {"file", name},
                       {"lead", rir.lead},
                       {"max_order", rir.max_order},
                       {"first_arrival", FirstArrival(rir)}});
    }
  }
  WriteJsonFile(out / "rirs.json", {{"schema_version", kSchemaVersion}, {"rirs", index}});
}

void CommandSeparate(const fs::path& manifest_path, const std::optional<fs::path>& config_path,
                     const fs::path& out, const std::optional<fs::path>& external_dir,
                     std::size_t jobs) {
  const Manifest manifest = ReadManifest(manifest_path);
  fs::create_directories(out);
  std::vector<json> timings(manifest.examples.size());
  ParallelForEach(manifest.examples.size(), jobs, [&](std::size_t i) {
    const Example ex = LoadExample(manifest.examples[i]);
    const PipelineConfig config =
        config_path ? PipelineConfigFromJson(ReadJsonFile(*config_path), ex.mixture.sample_rate())
                    : PipelineConfig::Default(ex.mixture.sample_rate());
    const SeparationTrace trace = Separate(ex, config, external_dir);
    json t = json::object();
    for (const auto& stage : trace.stages) {
      WriteEstimates(out, ex.id, stage);
      t[stage.name] = stage.seconds;
    }
    timings[i] = {{"id", ex.id}, {"seconds", t}};
    spdlog::info("separated {}", ex.id);
  });
  WriteJsonFile(out / "timings.json", timings);
}

void CommandEvaluate(const fs::path& manifest_path, const fs::path& estimates, const fs::path& report,
                     std::size_t ref_channel, std::size_t jobs) {
  const Manifest manifest = ReadManifest(manifest_path);
  struct Row {
    std::string id, stage;
    MetricReport metrics;
  };
  std::vector<std::vector<Row>> rows(manifest.examples.size());
  ParallelForEach(manifest.examples.size(), jobs, [&](std::size_t i) {
    const Example ex = LoadExample(manifest.examples[i]);
    const MultichannelWaveform refs = ReferenceImages(ex, ref_channel);
    const bool pit = LayoutOf(ex.task).permutation_invariant;
    const auto stages = StagesInDirectory(estimates, ex.id);
    BEAMKIT_REQUIRE(!stages.empty(), ErrorCode::kIo, "no estimates for " + ex.id);
    for (const auto& stage : stages) {
      const MultichannelWaveform est = ReadEstimates(estimates, ex.id, stage, refs.channels());
      rows[i].push_back({ex.id, stage, Evaluate(est, refs, ex.mixture.channel(ref_channel), pit)});
    }
  });

  std::ofstream csv(report);
  BEAMKIT_REQUIRE(csv.good(), ErrorCode::kIo, "cannot create " + report.string());
  csv << "example,stage,source,estimate,si_snr_db,si_snri_db,mixture_si_snr_db\n";
  csv.precision(10);
  std::map<std::string, std::pair<double, std::size_t>> per_stage;
  std::vector<std::string> stage_order;
  json records = json::array();
  for (const auto& example_rows : rows) {
    for (const auto& r : example_rows) {
      for (std::size_t s = 0; s < r.metrics.si_snr.size(); ++s) {
        csv << r.id << ',' << r.stage << ',' << s + 1 << ',' << r.metrics.permutation[s] + 1 << ','
            << r.metrics.si_snr[s] << ',' << r.metrics.si_snri[s] << ','
            << r.metrics.mixture_si_snr[s] << '\n';
      }
      if (!per_stage.contains(r.stage)) stage_order.push_back(r.stage);
      auto& acc = per_stage[r.stage];
      acc.first += r.metrics.mean_si_snri();
      acc.second += 1;
      records.push_back({{"example", r.id},
                         {"stage", r.stage},
                         {"si_snr_db", r.metrics.si_snr},
                         {"si_snri_db", r.metrics.si_snri},
                         {"mixture_si_snr_db", r.metrics.mixture_si_snr},
                         {"permutation", r.metrics.permutation}});
    }
  }
  BEAMKIT_REQUIRE(csv.good(), ErrorCode::kIo, "write failed for " + report.string());
  json summary = json::object();
  for (const auto& stage : stage_order) {
    const auto& [sum, count] = per_stage[stage];
    summary[stage] = {{"mean_si_snri_db", sum / static_cast<double>(count)}, {"examples", count}};
    std::cout << stage << " mean SI-SNRi " << sum / static_cast<double>(count) << " dB\n";
  }
  fs::path json_path = report;
  json_path.replace_extension(".json");
  WriteJsonFile(json_path, {{"schema_version", kSchemaVersion}, {"summary", summary}, {"records", records}});
}

void CommandSweep(const fs::path& manifest_path, const fs::path& grid_path, const fs::path& report,
                  std::size_t jobs) {
  const SweepGrid grid = SweepGridFromJson(ReadJsonFile(grid_path));
  const std::vector<Example> examples = LoadExamples(ReadManifest(manifest_path), jobs);
  const SweepResult result = RunSweep(grid, examples, jobs);
  WriteSweepReport(result, grid, report);
  const SweepRow& best = result.Best();
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"label", CellLabel(r.cell)}, {"mics", r.cell.mics}, {"mean_si_snri_db", r.mean_si_snri}});
  }
  fs::path json_path = report;
  json_path.replace_extension(".json");
  WriteJsonFile(json_path, {{"schema_version", kSchemaVersion},
                            {"target_stage", result.target_stage},
                            {"best", {{"label", CellLabel(best.cell)}, {"mics", best.cell.mics},
                                      {"mean_si_snri_db", best.mean_si_snri}}},
                            {"cells", rows}});
  std::cout << "best: " << result.target_stage << ", " << best.cell.mics << " mic, "
            << CellLabel(best.cell) << ": " << best.mean_si_snri << " dB\n";
}

}  // namespace

int RunCli(int argc, char** argv) {
  auto logger = spdlog::get("beamkit");
  if (!logger) logger = spdlog::stderr_color_mt("beamkit");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"beamkit: multichannel mask-based beamforming toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t jobs = 1;
  bool verbose = false;
  app.add_option("--jobs,-j", jobs, "examples processed concurrently")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", verbose, "log progress to stderr");

  fs::path scene_path, out, manifest, estimates, report, grid, speech_dir;
  std::optional<fs::path> config, external;
  std::optional<int> max_order;
  double perturb = 0.08;
  std::string task = "sep2";
  std::size_t count = 20, mics = 8, ref_channel = 0;
  std::uint64_t seed = 0;
  double duration = 10.0;
  int sample_rate = 16000;

  auto* rir = app.add_subcommand("rir", "image-method RIRs for every (source, mic) of a scene");
  rir->add_option("--scene", scene_path)->required()->check(CLI::ExistingFile);
  rir->add_option("--out", out)->required();
  rir->add_option("--max-order", max_order)->check(CLI::NonNegativeNumber);
  rir->add_option("--perturb", perturb)->check(CLI::NonNegativeNumber);

  auto* simulate = app.add_subcommand("simulate", "simulate an evaluation set");
  simulate->add_option("--task", task)->required()->check(CLI::IsMember({"enh2noise3", "sep2", "sep3"}));
  simulate->add_option("--n", count)->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed)->required();
  simulate->add_option("--out", out)->required();
  simulate->add_option("--mics", mics)->check(CLI::IsMember({1, 2, 4, 8}));
  simulate->add_option("--duration", duration)->check(CLI::PositiveNumber);
  simulate->add_option("--sample-rate", sample_rate)->check(CLI::PositiveNumber);
  simulate->add_option("--speech-dir", speech_dir, "mono WAV clips used as speech sources")
      ->check(CLI::ExistingDirectory);

  auto* separate = app.add_subcommand("separate", "run the separation chain on a manifest");
  separate->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  separate->add_option("--config", config)->check(CLI::ExistingFile);
  separate->add_option("--out", out)->required();
  separate->add_option("--external", external, "directory of <example>_MN<i>_<source>.wav estimates")
      ->check(CLI::ExistingDirectory);

  auto* evaluate = app.add_subcommand("evaluate", "score estimates against the manifest images");
  evaluate->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--estimates", estimates)->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--report", report)->required();
  evaluate->add_option("--ref-channel", ref_channel);

  auto* sweep = app.add_subcommand("sweep", "grid evaluation of beamformer settings");
  sweep->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid)->required()->check(CLI::ExistingFile);
  sweep->add_option("--report", report)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (verbose) spdlog::set_level(spdlog::level::info);

  try {
    if (rir->parsed()) {
      CommandRir(scene_path, out, max_order, perturb);
    } else if (simulate->parsed()) {
      DatasetOptions options;
      options.task = ParseTask(task);
      options.num_examples = count;
      options.seed = SeedWithOverride(seed);
      options.mic_subset = mics;
      options.duration_s = duration;
      options.sample_rate = sample_rate;
      if (!speech_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(speech_dir)) {
          if (e.path().extension() == ".wav") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        BEAMKIT_REQUIRE(!files.empty(), ErrorCode::kIo, "no .wav files in " + speech_dir.string());
        for (const auto& f : files) {
          const MultichannelWaveform w = ReadWav(f);
          BEAMKIT_REQUIRE(w.channels() == 1 && w.sample_rate() == sample_rate, ErrorCode::kInvalidInput,
                          f.string() + " must be mono at " + std::to_string(sample_rate) + " Hz");
          options.speech_pool.emplace_back(w.channel(0).begin(), w.channel(0).end());
        }
      }
      SimulateDataset(options, out, jobs);
    } else if (separate->parsed()) {
      CommandSeparate(manifest, config, out, external, jobs);
    } else if (evaluate->parsed()) {
      CommandEvaluate(manifest, estimates, report, ref_channel, jobs);
    } else if (sweep->parsed()) {
      CommandSweep(manifest, grid, report, jobs);
    }
  } catch (const Error& e) {
    std::cerr << "beamkit: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "beamkit: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace beamkit
