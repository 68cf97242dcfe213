// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include <spdlog/spdlog.h>

#include "beamkit/error.hpp"
#include "beamkit/metrics.hpp"

namespace beamkit {

namespace {

std::string FormatNumber(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

BfMode BlockVariant(BfMode mode) {
  switch (mode) {
    case BfMode::kTi: return BfMode::kBlockTi;
    case BfMode::kTvf: return BfMode::kBlockTvf;
    default: return mode;
  }
}

}  // namespace

void SweepGrid::Validate() const {
  BEAMKIT_REQUIRE(!windows_ms.empty() && !contexts.empty() && !block_seconds.empty() &&
                      !mic_counts.empty() && !modes.empty(),
                  ErrorCode::kInvalidConfig, "sweep grid has an empty axis");
  BEAMKIT_REQUIRE(num_stages >= 2, ErrorCode::kInvalidConfig, "a sweep needs at least two stages");
  for (BfMode m : modes) {
    BEAMKIT_REQUIRE(m == BfMode::kTi || m == BfMode::kTvf, ErrorCode::kInvalidConfig,
                    "sweep modes are TI or TVF; block variants come from block_seconds");
  }
  for (double w : windows_ms) {
    BEAMKIT_REQUIRE(w > 0.0, ErrorCode::kInvalidConfig, "window sizes must be positive");
  }
  for (std::size_t c : contexts) {
    BEAMKIT_REQUIRE(c >= 1, ErrorCode::kInvalidConfig, "context sizes must be >= 1");
  }
  for (std::size_t m : mic_counts) MicSubsetVertices(m);
  BEAMKIT_REQUIRE(target_stage.size() >= 3 &&
                      (target_stage.rfind("MN", 0) == 0 || target_stage.rfind("BF", 0) == 0),
                  ErrorCode::kInvalidConfig, "target stage must look like MN<i> or BF<i>");
}

std::string CellLabel(const SweepCell& cell) {
  std::string label = ToString(cell.mode) + " " + FormatNumber(cell.window_ms) + "ms x " +
                      std::to_string(cell.context);
  if (cell.block_seconds) label += " block " + FormatNumber(*cell.block_seconds) + "s";
  return label;
}

PipelineConfig CellPipeline(const SweepGrid& grid, const SweepCell& cell, int sample_rate) {
  PipelineConfig config;
  config.beamformed_phase = grid.beamformed_phase;
  for (std::size_t i = 1; i <= grid.num_stages; ++i) {
    StageConfig s;
    s.index = static_cast<int>(i);
    s.ref_channel = grid.ref_channel;
    s.loading = grid.loading;
    s.bf_stft = StftConfig::Beamforming(cell.window_ms, sample_rate);
    s.ctx = ContextConfig::FromTotal(cell.context);
    if (i == grid.num_stages) {
      s.bf_mode = BfMode::kNone;
    } else if (cell.block_seconds) {
      s.bf_mode = BlockVariant(cell.mode);
      s.block_frames = BlockFramesFromSeconds(*cell.block_seconds, s.bf_stft);
    } else {
      s.bf_mode = cell.mode;
    }
    config.stages.push_back(s);
  }
  return config;
}

std::vector<SweepCell> ExpandGrid(const SweepGrid& grid) {
  grid.Validate();
  std::vector<SweepCell> cells;
  for (BfMode mode : grid.modes)
    for (std::size_t mics : grid.mic_counts)
      for (double w : grid.windows_ms)
        for (std::size_t c : grid.contexts)
          for (const auto& b : grid.block_seconds) cells.push_back({mode, w, c, b, mics});
  return cells;
}

const SweepRow& SweepResult::Best() const {
  BEAMKIT_REQUIRE(!rows.empty(), ErrorCode::kInvalidInput, "empty sweep result");
  return *std::max_element(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.mean_si_snri < b.mean_si_snri;
  });
}

std::vector<std::size_t> SubsetChannels(const std::vector<std::size_t>& vertices,
                                        std::size_t mic_count) {
  std::vector<std::size_t> channels;
  for (std::size_t v : MicSubsetVertices(mic_count)) {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    BEAMKIT_REQUIRE(it != vertices.end(), ErrorCode::kInvalidInput,
                    "recording lacks cube vertex " + std::to_string(v) + " needed for " +
                        std::to_string(mic_count) + " microphones");
    channels.push_back(static_cast<std::size_t>(it - vertices.begin()));
  }
  return channels;
}

SweepResult RunSweep(const SweepGrid& grid, const std::vector<Example>& examples,
                     std::size_t jobs) {
  BEAMKIT_REQUIRE(!examples.empty(), ErrorCode::kInvalidInput, "sweep needs examples");
  const std::vector<SweepCell> cells = ExpandGrid(grid);
  const std::size_t n_ex = examples.size();
  std::vector<double> scores(n_ex * cells.size(), 0.0);

  ParallelForEach(n_ex, jobs, [&](std::size_t e) {
    const Example& ex = examples[e];
    const bool pit = LayoutOf(ex.task).permutation_invariant;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const SweepCell& cell = cells[c];
      const auto channels = SubsetChannels(ex.scene.mic_vertices, cell.mics);
      const MultichannelWaveform mixture = ex.mixture.SelectChannels(channels);
      std::vector<MultichannelWaveform> truth;
      for (const auto& img : ex.images) truth.push_back(img.SelectChannels(channels));
      const PipelineConfig config = CellPipeline(grid, cell, mixture.sample_rate());
      const SeparationTrace trace = RunSequence(mixture, truth, config);

      MultichannelWaveform refs(truth.size(), mixture.length(), mixture.sample_rate());
      for (std::size_t s = 0; s < truth.size(); ++s) {
        const auto src = truth[s].channel(grid.ref_channel);
        std::copy(src.begin(), src.end(), refs.channel(s).begin());
      }
      const MetricReport report = Evaluate(trace.Get(grid.target_stage).estimates, refs,
                                           mixture.channel(grid.ref_channel), pit);
      scores[e * cells.size() + c] = report.mean_si_snri();
      spdlog::debug("{} {}: {:.3f} dB", ex.id, CellLabel(cell), scores[e * cells.size() + c]);
    }
  });

  SweepResult result;
  result.target_stage = grid.target_stage;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double sum = 0.0;
    for (std::size_t e = 0; e < n_ex; ++e) sum += scores[e * cells.size() + c];
    result.rows.push_back({cells[c], sum / static_cast<double>(n_ex), n_ex});
  }
  return result;
}

void WriteSweepReport(const SweepResult& result, const SweepGrid& grid,
                      const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path);
    BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "cannot create " + csv_path.string());
    out << "label,mode,window_ms,context,block_s,mics,stage,mean_si_snri_db,examples\n";
    out.precision(10);
    for (const auto& r : result.rows) {
      out << '"' << CellLabel(r.cell) << "\"," << ToString(r.cell.mode) << ',' << r.cell.window_ms
          << ',' << r.cell.context << ','
          << (r.cell.block_seconds ? FormatNumber(*r.cell.block_seconds) : std::string("full"))
          << ',' << r.cell.mics << ',' << result.target_stage << ',' << r.mean_si_snri << ','
          << r.count << '\n';
    }
    BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "write failed for " + csv_path.string());
  }

  // One plot file per swept axis: best mean over the remaining axes.
  using Key = std::function<double(const SweepCell&)>;
  const std::vector<std::tuple<std::string, std::size_t, Key>> axes = {
      {"window_ms", grid.windows_ms.size(), [](const SweepCell& c) { return c.window_ms; }},
      {"context", grid.contexts.size(), [](const SweepCell& c) { return double(c.context); }},
      {"block_s", grid.block_seconds.size(),
       [](const SweepCell& c) { return c.block_seconds.value_or(0.0); }},
      {"mics", grid.mic_counts.size(), [](const SweepCell& c) { return double(c.mics); }},
  };
  const auto stem = csv_path.parent_path() / csv_path.stem();
  for (const auto& [name, count, key] : axes) {
    if (count < 2) continue;
    std::map<double, double> best;
    for (const auto& r : result.rows) {
      const double x = key(r.cell);
      auto it = best.find(x);
      if (it == best.end() || r.mean_si_snri > it->second) best[x] = r.mean_si_snri;
    }
    const std::filesystem::path dat = stem.string() + "_" + name + ".dat";
    std::ofstream out(dat);
    BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "cannot create " + dat.string());
    out << "# " << name << " best_mean_si_snri_db\n";
    out.precision(10);
    for (const auto& [x, y] : best) out << x << ' ' << y << '\n';
  }
}

}  // namespace beamkit
