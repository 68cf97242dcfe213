// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Grid evaluation of beamforming configurations over a dataset.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "beamkit/dataset.hpp"
#include "beamkit/pipeline.hpp"

namespace beamkit {

struct SweepGrid {
  std::vector<double> windows_ms{64.0};
  std::vector<std::size_t> contexts{4};
  // nullopt: whole-utterance statistics.
  std::vector<std::optional<double>> block_seconds{std::nullopt};
  std::vector<std::size_t> mic_counts{8};
  std::vector<BfMode> modes{BfMode::kTi};
  std::string target_stage = "BF2";
  std::size_t num_stages = 3;
  std::size_t ref_channel = 0;
  double loading = kDefaultLoading;
  bool beamformed_phase = true;

  void Validate() const;
};

struct SweepCell {
  BfMode mode = BfMode::kTi;
  double window_ms = 64.0;
  std::size_t context = 4;
  std::optional<double> block_seconds;
  std::size_t mics = 8;
};

// "TI 64ms x 4", with " block 2s" appended for block cells.
std::string CellLabel(const SweepCell& cell);

// Pipeline configuration that a cell stands for. Block modes are chosen
// automatically when the cell carries a block length.
PipelineConfig CellPipeline(const SweepGrid& grid, const SweepCell& cell, int sample_rate);

std::vector<SweepCell> ExpandGrid(const SweepGrid& grid);

struct SweepRow {
  SweepCell cell;
  double mean_si_snri = 0.0;
  std::size_t count = 0;
};

struct SweepResult {
  std::string target_stage;
  std::vector<SweepRow> rows;

  const SweepRow& Best() const;
};

// Channels of `mixture` (with cube vertex ids `vertices`) forming the
// `mic_count` subset.
std::vector<std::size_t> SubsetChannels(const std::vector<std::size_t>& vertices,
                                        std::size_t mic_count);

SweepResult RunSweep(const SweepGrid& grid, const std::vector<Example>& examples,
                     std::size_t jobs = 1);

// CSV table plus `<stem>_<axis>.dat` plot files (axis value, best mean
// SI-SNRi) for every axis with more than one value.
void WriteSweepReport(const SweepResult& result, const SweepGrid& grid,
                      const std::filesystem::path& csv_path);

}  // namespace beamkit
