// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <spdlog/spdlog.h>

#include "beamkit/error.hpp"
#include "beamkit/stft.hpp"

namespace beamkit {

namespace {

bool IsBlock(BfMode mode) { return mode == BfMode::kBlockTi || mode == BfMode::kBlockTvf; }
bool IsTvf(BfMode mode) { return mode == BfMode::kTvf || mode == BfMode::kBlockTvf; }

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MultichannelWaveform ReferenceChannels(const std::vector<MultichannelWaveform>& truth,
                                       std::size_t ref_channel) {
  BEAMKIT_REQUIRE(!truth.empty(), ErrorCode::kInvalidInput, "oracle masks need ground truth");
  MultichannelWaveform refs(truth.size(), truth[0].length(), truth[0].sample_rate());
  for (std::size_t s = 0; s < truth.size(); ++s) {
    BEAMKIT_REQUIRE(ref_channel < truth[s].channels() && truth[s].length() == refs.length(),
                    ErrorCode::kShape, "ground-truth images do not match");
    const auto src = truth[s].channel(ref_channel);
    std::copy(src.begin(), src.end(), refs.channel(s).begin());
  }
  return refs;
}

}  // namespace

std::string ToString(MaskSource source) {
  return source == MaskSource::kOracle ? "oracle" : "external";
}

std::string ToString(BfMode mode) {
  switch (mode) {
    case BfMode::kNone: return "None";
    case BfMode::kTi: return "TI";
    case BfMode::kTvf: return "TVF";
    case BfMode::kBlockTi: return "BlockTI";
    case BfMode::kBlockTvf: return "BlockTVF";
  }
  return "?";
}

MaskSource ParseMaskSource(const std::string& name) {
  if (name == "oracle") return MaskSource::kOracle;
  if (name == "external") return MaskSource::kExternalFiles;
  throw Error(ErrorCode::kInvalidConfig, "unknown mask source '" + name + "'");
}

BfMode ParseBfMode(const std::string& name) {
  for (BfMode m : {BfMode::kNone, BfMode::kTi, BfMode::kTvf, BfMode::kBlockTi, BfMode::kBlockTvf}) {
    if (ToString(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown beamforming mode '" + name + "'");
}

PipelineConfig PipelineConfig::Default(int sample_rate) {
  PipelineConfig config;
  for (int i = 1; i <= 3; ++i) {
    StageConfig stage;
    stage.index = i;
    stage.bf_stft = StftConfig::Beamforming(64.0, sample_rate);
    stage.bf_mode = i == 3 ? BfMode::kNone : BfMode::kTi;
    config.stages.push_back(stage);
  }
  return config;
}

void PipelineConfig::Validate() const {
  BEAMKIT_REQUIRE(!stages.empty(), ErrorCode::kInvalidConfig, "pipeline has no stages");
  BEAMKIT_REQUIRE(stages.back().bf_mode == BfMode::kNone, ErrorCode::kInvalidConfig,
                  "the final stage must not beamform");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const StageConfig& s = stages[i];
    BEAMKIT_REQUIRE(s.index == static_cast<int>(i) + 1, ErrorCode::kInvalidConfig,
                    "stage indices must be 1, 2, ... in order");
    BEAMKIT_REQUIRE(s.loading >= 0.0, ErrorCode::kInvalidConfig, "loading must be >= 0");
    if (s.bf_mode == BfMode::kNone) continue;
    s.bf_stft.Validate();
    BEAMKIT_REQUIRE(!IsBlock(s.bf_mode) || s.block_frames.has_value(), ErrorCode::kInvalidConfig,
                    "block beamforming needs a block length");
    BEAMKIT_REQUIRE(IsBlock(s.bf_mode) || !s.block_frames.has_value(), ErrorCode::kInvalidConfig,
                    "block length given for a non-block mode");
  }
}

std::size_t BlockFramesFromSeconds(double seconds, const StftConfig& config) {
  BEAMKIT_REQUIRE(seconds > 0.0, ErrorCode::kInvalidConfig, "block length must be positive");
  const double frames = seconds * config.sample_rate / static_cast<double>(config.hop);
  auto even = static_cast<std::size_t>(2.0 * std::round(frames / 2.0));
  return std::max<std::size_t>(even, 2);
}

const StageOutput* SeparationTrace::Find(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const StageOutput& SeparationTrace::Get(const std::string& name) const {
  const StageOutput* s = Find(name);
  BEAMKIT_REQUIRE(s != nullptr, ErrorCode::kInvalidInput, "trace has no stage " + name);
  return *s;
}

MultichannelWaveform BeamformStage(const MultichannelWaveform& mixture,
                                   const MultichannelWaveform& estimates,
                                   const StageConfig& stage) {
  BEAMKIT_REQUIRE(stage.bf_mode != BfMode::kNone, ErrorCode::kInvalidConfig,
                  "stage does not beamform");
  BEAMKIT_REQUIRE(estimates.length() == mixture.length(), ErrorCode::kShape,
                  "estimates and mixture differ in length");
  BEAMKIT_REQUIRE(stage.ref_channel < mixture.channels(), ErrorCode::kInvalidConfig,
                  "reference channel out of range");
  StftConfig cfg = stage.bf_stft;
  cfg.sample_rate = mixture.sample_rate();

  const MultichannelSpectrogram est_spec = Stft(estimates, cfg);
  const MaskTensor masks = WienerLikeMask(est_spec);
  const ContextSpectrogram ctx = ExpandContext(Stft(mixture, cfg), stage.ctx);
  const RefSelector u(mixture.channels(), stage.ctx, stage.ref_channel);

  BeamformOptions options;
  options.mode = IsTvf(stage.bf_mode) ? BeamformMode::kTimeVaryingFactorized
                                      : BeamformMode::kTimeInvariant;
  options.loading = stage.loading;
  options.normalization = stage.normalization;
  if (IsBlock(stage.bf_mode)) options.block_frames = stage.block_frames;

  TfTensor psd;
  if (IsTvf(stage.bf_mode)) psd = PowerSpectra(est_spec);
  const MultichannelSpectrogram out =
      Beamform(ctx, masks, IsTvf(stage.bf_mode) ? &psd : nullptr, u, options);
  return Istft(out);
}

SeparationTrace RunSequence(const MultichannelWaveform& mixture, MaskProvider& provider,
                            const PipelineConfig& config) {
  config.Validate();
  BEAMKIT_REQUIRE(!mixture.empty(), ErrorCode::kInvalidInput, "empty mixture");
  SeparationTrace trace;
  std::optional<MultichannelWaveform> prior_bf;
  for (const StageConfig& stage : config.stages) {
    BEAMKIT_REQUIRE(stage.ref_channel < mixture.channels(), ErrorCode::kInvalidConfig,
                    "reference channel out of range");
    const auto mix_ref = mixture.channel(stage.ref_channel);

    auto start = std::chrono::steady_clock::now();
    MultichannelWaveform est = provider.Estimate(stage.index, mix_ref, mixture.sample_rate(),
                                                 prior_bf ? &*prior_bf : nullptr);
    BEAMKIT_REQUIRE(est.length() == mixture.length() && est.channels() == provider.num_sources(),
                    ErrorCode::kShape, "mask stage returned estimates of the wrong shape");
    est = MixtureConsistencyProjection(est, mix_ref);
    trace.stages.push_back({"MN" + std::to_string(stage.index), est, SecondsSince(start)});
    spdlog::debug("MN{} done in {:.3f}s", stage.index, trace.stages.back().seconds);

    if (stage.bf_mode == BfMode::kNone) continue;
    start = std::chrono::steady_clock::now();
    prior_bf = BeamformStage(mixture, est, stage);
    trace.stages.push_back({"BF" + std::to_string(stage.index), *prior_bf, SecondsSince(start)});
    spdlog::debug("BF{} done in {:.3f}s", stage.index, trace.stages.back().seconds);
  }
  return trace;
}

SeparationTrace RunSequence(const MultichannelWaveform& mixture,
                            const std::vector<MultichannelWaveform>& truth,
                            const PipelineConfig& config) {
  config.Validate();
  for (const auto& stage : config.stages) {
    BEAMKIT_REQUIRE(stage.mask_source == MaskSource::kOracle, ErrorCode::kInvalidConfig,
                    "this entry point only drives oracle stages");
  }
  OracleMaskProvider::Options options;
  options.kind = config.oracle_kind;
  options.stft = StftConfig::Masking(mixture.sample_rate());
  options.beamformed_phase = config.beamformed_phase;
  OracleMaskProvider provider(ReferenceChannels(truth, config.stages.front().ref_channel), options);
  return RunSequence(mixture, provider, config);
}

ExternalEstimateProvider::ExternalEstimateProvider(std::map<int, MultichannelWaveform> estimates)
    : estimates_(std::move(estimates)) {
  BEAMKIT_REQUIRE(!estimates_.empty(), ErrorCode::kInvalidInput, "no external estimates");
  num_sources_ = estimates_.begin()->second.channels();
  for (const auto& [stage, est] : estimates_) {
    BEAMKIT_REQUIRE(est.channels() == num_sources_, ErrorCode::kShape,
                    "external estimates disagree on the number of sources");
  }
}

MultichannelWaveform ExternalEstimateProvider::Estimate(int stage,
                                                        std::span<const double> mixture_ref,
                                                        int sample_rate,
                                                        const MultichannelWaveform*) {
  auto it = estimates_.find(stage);
  BEAMKIT_REQUIRE(it != estimates_.end(), ErrorCode::kInvalidInput,
                  "missing external estimates for stage " + std::to_string(stage));
  BEAMKIT_REQUIRE(it->second.length() == mixture_ref.size() &&
                      it->second.sample_rate() == sample_rate,
                  ErrorCode::kShape, "external estimates do not match the mixture");
  return it->second;
}

}  // namespace beamkit
