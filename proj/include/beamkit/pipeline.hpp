// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Sequential separate / beamform / separate ... chain.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beamkit/beamform.hpp"
#include "beamkit/mask.hpp"
#include "beamkit/signal_types.hpp"

namespace beamkit {

enum class MaskSource { kOracle, kExternalFiles };
enum class BfMode { kNone, kTi, kTvf, kBlockTi, kBlockTvf };

std::string ToString(MaskSource source);
std::string ToString(BfMode mode);
MaskSource ParseMaskSource(const std::string& name);
BfMode ParseBfMode(const std::string& name);

struct StageConfig {
  int index = 1;  // 1-based
  MaskSource mask_source = MaskSource::kOracle;
  BfMode bf_mode = BfMode::kTi;
  StftConfig bf_stft = StftConfig::Beamforming(64.0);
  ContextConfig ctx = ContextConfig::FromTotal(4);
  std::optional<std::size_t> block_frames;
  std::size_t ref_channel = 0;
  double loading = kDefaultLoading;
  Normalization normalization;
};

struct PipelineConfig {
  std::vector<StageConfig> stages;
  OracleMaskKind oracle_kind = OracleMaskKind::kWienerLike;
  bool beamformed_phase = true;

  // Three stages, TI beamforming with a 64 ms window and c = 4 after the
  // first two, reference channel 0.
  static PipelineConfig Default(int sample_rate = 16000);
  // Throws kInvalidConfig on contradictions (e.g. a block mode without a
  // block length, or a final stage that beamforms).
  void Validate() const;
};

// Even block length in frames covering `seconds` at the given hop.
std::size_t BlockFramesFromSeconds(double seconds, const StftConfig& config);

struct StageOutput {
  std::string name;               // "MN1", "BF1", ...
  MultichannelWaveform estimates; // one channel per source
  double seconds = 0.0;
};

struct SeparationTrace {
  std::vector<StageOutput> stages;

  const StageOutput* Find(const std::string& name) const;
  const StageOutput& Get(const std::string& name) const;
};

// Beamforms `mixture` once, with masks re-derived from `estimates` under the
// stage's STFT.
MultichannelWaveform BeamformStage(const MultichannelWaveform& mixture,
                                   const MultichannelWaveform& estimates,
                                   const StageConfig& stage);

SeparationTrace RunSequence(const MultichannelWaveform& mixture, MaskProvider& provider,
                            const PipelineConfig& config);

// Oracle run with per-source reverberant images (each M channels).
SeparationTrace RunSequence(const MultichannelWaveform& mixture,
                            const std::vector<MultichannelWaveform>& truth,
                            const PipelineConfig& config);

// Per-stage estimates read from disk; stage i must be present when asked.
class ExternalEstimateProvider : public MaskProvider {
 public:
  ExternalEstimateProvider(std::map<int, MultichannelWaveform> estimates);

  std::size_t num_sources() const override { return num_sources_; }
  MultichannelWaveform Estimate(int stage, std::span<const double> mixture_ref, int sample_rate,
                                const MultichannelWaveform* prior_beamformed) override;

 private:
  std::map<int, MultichannelWaveform> estimates_;
  std::size_t num_sources_ = 0;
};

}  // namespace beamkit
