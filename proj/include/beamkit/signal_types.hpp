// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace beamkit {

using Complex = std::complex<double>;

enum class WindowKind { kSqrtHann, kVorbis };

std::string ToString(WindowKind kind);
WindowKind ParseWindowKind(const std::string& name);

struct StftConfig {
  WindowKind window_kind = WindowKind::kSqrtHann;
  std::size_t win_len = 512;
  std::size_t hop = 128;
  std::size_t fft_size = 512;
  int sample_rate = 16000;

  std::size_t num_bins() const { return fft_size / 2 + 1; }
  // Throws kInvalidConfig when the configuration cannot be used for analysis.
  void Validate() const;

  // 32 ms / 8 ms sqrt-Hann analysis used by the masking stages.
  static StftConfig Masking(int sample_rate = 16000);
  // Window of `window_ms` with a half-sized hop and next power-of-two FFT.
  static StftConfig Beamforming(double window_ms, int sample_rate = 16000,
                                WindowKind kind = WindowKind::kSqrtHann);

  bool operator==(const StftConfig&) const = default;
};

std::size_t NextPowerOfTwo(std::size_t n);

// M channels of equal length, stored channel-major.
class MultichannelWaveform {
 public:
  MultichannelWaveform() = default;
  MultichannelWaveform(std::size_t channels, std::size_t length, int sample_rate);

  std::size_t channels() const { return channels_; }
  std::size_t length() const { return length_; }
  int sample_rate() const { return sample_rate_; }
  bool empty() const { return channels_ == 0 || length_ == 0; }

  std::span<double> channel(std::size_t m) {
    return {samples_.data() + m * length_, length_};
  }
  std::span<const double> channel(std::size_t m) const {
    return {samples_.data() + m * length_, length_};
  }
  double& at(std::size_t m, std::size_t n) { return samples_[m * length_ + n]; }
  double at(std::size_t m, std::size_t n) const { return samples_[m * length_ + n]; }

  std::vector<double>& samples() { return samples_; }
  const std::vector<double>& samples() const { return samples_; }

  // Copies a subset of channels in the given order.
  MultichannelWaveform SelectChannels(std::span<const std::size_t> indices) const;
  static MultichannelWaveform FromChannels(const std::vector<std::vector<double>>& channels,
                                           int sample_rate);

  bool operator==(const MultichannelWaveform&) const = default;

 private:
  std::size_t channels_ = 0;
  std::size_t length_ = 0;
  int sample_rate_ = 16000;
  std::vector<double> samples_;
};

// Complex C x T x F tensor. The channel axis holds microphones for mixture
// spectrograms and sources for per-source spectrograms.
class MultichannelSpectrogram {
 public:
  MultichannelSpectrogram() = default;
  MultichannelSpectrogram(std::size_t channels, std::size_t frames, const StftConfig& config,
                          std::size_t num_samples);

  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  const StftConfig& config() const { return config_; }
  // Length of the time-domain signal the spectrogram was computed from.
  std::size_t num_samples() const { return num_samples_; }

  Complex& at(std::size_t c, std::size_t t, std::size_t f) {
    return data_[(c * frames_ + t) * bins_ + f];
  }
  const Complex& at(std::size_t c, std::size_t t, std::size_t f) const {
    return data_[(c * frames_ + t) * bins_ + f];
  }
  std::span<Complex> frame(std::size_t c, std::size_t t) {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::span<const Complex> frame(std::size_t c, std::size_t t) const {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::span<Complex> channel(std::size_t c) {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }
  std::span<const Complex> channel(std::size_t c) const {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  MultichannelSpectrogram SelectChannels(std::span<const std::size_t> indices) const;
  // Raises kShape unless frames, bins, config and length agree.
  void RequireSameLayout(const MultichannelSpectrogram& other, const char* what) const;

 private:
  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::size_t num_samples_ = 0;
  StftConfig config_;
  std::vector<Complex> data_;
};

}  // namespace beamkit
