// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/signal_types.hpp"

#include <cmath>

#include "beamkit/error.hpp"

namespace beamkit {

std::string ToString(WindowKind kind) {
  return kind == WindowKind::kVorbis ? "vorbis" : "sqrt_hann";
}

WindowKind ParseWindowKind(const std::string& name) {
  if (name == "vorbis") return WindowKind::kVorbis;
  if (name == "sqrt_hann" || name == "sqrthann") return WindowKind::kSqrtHann;
  throw Error(ErrorCode::kInvalidConfig, "unknown window kind '" + name + "'");
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void StftConfig::Validate() const {
  BEAMKIT_REQUIRE(win_len >= 2 && win_len % 2 == 0, ErrorCode::kInvalidConfig,
                  "window length must be even and >= 2, got " + std::to_string(win_len));
  BEAMKIT_REQUIRE(hop >= 1 && hop <= win_len, ErrorCode::kInvalidConfig,
                  "hop must lie in [1, win_len]");
  BEAMKIT_REQUIRE(win_len % hop == 0, ErrorCode::kInvalidConfig,
                  "hop must divide the window length");
  BEAMKIT_REQUIRE(fft_size >= win_len && (fft_size & (fft_size - 1)) == 0,
                  ErrorCode::kInvalidConfig, "fft size must be a power of two >= win_len");
  BEAMKIT_REQUIRE(sample_rate > 0, ErrorCode::kInvalidConfig, "sample rate must be positive");
}

StftConfig StftConfig::Masking(int sample_rate) {
  StftConfig config;
  config.window_kind = WindowKind::kSqrtHann;
  config.win_len = static_cast<std::size_t>(std::lround(0.032 * sample_rate));
  config.hop = static_cast<std::size_t>(std::lround(0.008 * sample_rate));
  config.fft_size = NextPowerOfTwo(config.win_len);
  config.sample_rate = sample_rate;
  return config;
}

StftConfig StftConfig::Beamforming(double window_ms, int sample_rate, WindowKind kind) {
  StftConfig config;
  config.window_kind = kind;
  config.win_len = static_cast<std::size_t>(std::lround(window_ms * 1e-3 * sample_rate));
  config.win_len += config.win_len % 2;
  config.hop = config.win_len / 2;
  config.fft_size = NextPowerOfTwo(config.win_len);
  config.sample_rate = sample_rate;
  return config;
}

MultichannelWaveform::MultichannelWaveform(std::size_t channels, std::size_t length,
                                           int sample_rate)
    : channels_(channels), length_(length), sample_rate_(sample_rate),
      samples_(channels * length, 0.0) {}

MultichannelWaveform MultichannelWaveform::SelectChannels(
    std::span<const std::size_t> indices) const {
  MultichannelWaveform out(indices.size(), length_, sample_rate_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    BEAMKIT_REQUIRE(indices[i] < channels_, ErrorCode::kShape, "channel index out of range");
    auto src = channel(indices[i]);
    std::copy(src.begin(), src.end(), out.channel(i).begin());
  }
  return out;
}

MultichannelWaveform MultichannelWaveform::FromChannels(
    const std::vector<std::vector<double>>& channels, int sample_rate) {
  BEAMKIT_REQUIRE(!channels.empty(), ErrorCode::kInvalidInput, "no channels");
  MultichannelWaveform out(channels.size(), channels.front().size(), sample_rate);
  for (std::size_t m = 0; m < channels.size(); ++m) {
    BEAMKIT_REQUIRE(channels[m].size() == out.length(), ErrorCode::kShape,
                    "channels differ in length");
    std::copy(channels[m].begin(), channels[m].end(), out.channel(m).begin());
  }
  return out;
}

MultichannelSpectrogram::MultichannelSpectrogram(std::size_t channels, std::size_t frames,
                                                 const StftConfig& config,
                                                 std::size_t num_samples)
    : channels_(channels), frames_(frames), bins_(config.num_bins()),
      num_samples_(num_samples), config_(config), data_(channels * frames * bins_) {}

MultichannelSpectrogram MultichannelSpectrogram::SelectChannels(
    std::span<const std::size_t> indices) const {
  MultichannelSpectrogram out(indices.size(), frames_, config_, num_samples_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    BEAMKIT_REQUIRE(indices[i] < channels_, ErrorCode::kShape, "channel index out of range");
    auto src = channel(indices[i]);
    std::copy(src.begin(), src.end(), out.channel(i).begin());
  }
  return out;
}

void MultichannelSpectrogram::RequireSameLayout(const MultichannelSpectrogram& other,
                                                const char* what) const {
  BEAMKIT_REQUIRE(frames_ == other.frames_ && bins_ == other.bins_ &&
                      config_ == other.config_ && num_samples_ == other.num_samples_,
                  ErrorCode::kShape, std::string(what) + ": spectrogram layouts differ");
}

}  // namespace beamkit
