// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/stft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "beamkit/error.hpp"
#include "fft_plans.hpp"

namespace beamkit {

using detail::FftBuffers;
using detail::PlansFor;
using detail::RealFftPlans;

std::vector<double> MakeWindow(WindowKind kind, std::size_t win_len) {
  BEAMKIT_REQUIRE(win_len >= 2 && win_len % 2 == 0, ErrorCode::kInvalidConfig,
                  "window length must be even and >= 2");
  std::vector<double> w(win_len);
  const double n_total = static_cast<double>(win_len);
  for (std::size_t n = 0; n < win_len; ++n) {
    const double phase = std::numbers::pi * (static_cast<double>(n) + 0.5) / n_total;
    if (kind == WindowKind::kVorbis) {
      const double s = std::sin(phase);
      w[n] = std::sin(0.5 * std::numbers::pi * s * s);
    } else {
      w[n] = std::sqrt(0.5 - 0.5 * std::cos(2.0 * phase));
    }
  }
  return w;
}

std::size_t NumFrames(std::size_t num_samples, const StftConfig& config) {
  const std::size_t padded = num_samples + config.win_len - config.hop;
  return (padded + config.hop - 1) / config.hop;
}

MultichannelSpectrogram Stft(const MultichannelWaveform& wave, const StftConfig& config) {
  config.Validate();
  BEAMKIT_REQUIRE(!wave.empty(), ErrorCode::kInvalidInput, "stft of an empty signal");
  const std::size_t n = wave.length();
  const std::size_t frames = NumFrames(n, config);
  const std::size_t lead = config.win_len - config.hop;
  const std::size_t bins = config.num_bins();
  const auto window = MakeWindow(config.window_kind, config.win_len);
  const RealFftPlans& plans = PlansFor(config.fft_size);

  MultichannelSpectrogram spec(wave.channels(), frames, config, n);
  FftBuffers buf(config.fft_size);
  double* in = buf.real.get();
  fftw_complex* out = buf.spec.get();
  for (std::size_t m = 0; m < wave.channels(); ++m) {
    auto x = wave.channel(m);
    for (std::size_t t = 0; t < frames; ++t) {
      // Frame t covers padded samples [t*hop, t*hop + win_len).
      const std::ptrdiff_t start =
          static_cast<std::ptrdiff_t>(t * config.hop) - static_cast<std::ptrdiff_t>(lead);
      for (std::size_t k = 0; k < config.win_len; ++k) {
        const std::ptrdiff_t idx = start + static_cast<std::ptrdiff_t>(k);
        in[k] = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n)) ? window[k] * x[idx] : 0.0;
      }
      std::fill(in + config.win_len, in + config.fft_size, 0.0);
      fftw_execute_dft_r2c(plans.forward, in, out);
      auto dst = spec.frame(m, t);
      for (std::size_t f = 0; f < bins; ++f) dst[f] = Complex(out[f][0], out[f][1]);
    }
  }
  return spec;
}

MultichannelWaveform Istft(const MultichannelSpectrogram& spec) {
  const StftConfig& config = spec.config();
  config.Validate();
  BEAMKIT_REQUIRE(spec.bins() == config.num_bins(), ErrorCode::kShape,
                  "bin count does not match the fft size");
  BEAMKIT_REQUIRE(spec.frames() == NumFrames(spec.num_samples(), config), ErrorCode::kShape,
                  "frame count does not match the signal length");
  const std::size_t n = spec.num_samples();
  const std::size_t frames = spec.frames();
  const std::size_t lead = config.win_len - config.hop;
  const std::size_t padded_len = (frames - 1) * config.hop + config.win_len;
  const auto window = MakeWindow(config.window_kind, config.win_len);
  const RealFftPlans& plans = PlansFor(config.fft_size);

  std::vector<double> envelope(padded_len, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < config.win_len; ++k) {
      envelope[t * config.hop + k] += window[k] * window[k];
    }
  }

  MultichannelWaveform wave(spec.channels(), n, config.sample_rate);
  FftBuffers buf(config.fft_size);
  double* time = buf.real.get();
  fftw_complex* freq = buf.spec.get();
  const double scale = 1.0 / static_cast<double>(config.fft_size);
  std::vector<double> acc(padded_len);
  for (std::size_t m = 0; m < spec.channels(); ++m) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t t = 0; t < frames; ++t) {
      auto src = spec.frame(m, t);
      for (std::size_t f = 0; f < spec.bins(); ++f) {
        freq[f][0] = src[f].real();
        freq[f][1] = src[f].imag();
      }
      // c2r ignores the imaginary part of DC and Nyquist.
      fftw_execute_dft_c2r(plans.inverse, freq, time);
      double* dst = acc.data() + t * config.hop;
      for (std::size_t k = 0; k < config.win_len; ++k) dst[k] += window[k] * time[k] * scale;
    }
    auto out = wave.channel(m);
    for (std::size_t i = 0; i < n; ++i) {
      const double env = envelope[lead + i];
      out[i] = env > 1e-12 ? acc[lead + i] / env : 0.0;
    }
  }
  return wave;
}

namespace detail {

const RealFftPlans& PlansFor(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, RealFftPlans> plans;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  FftBuffers scratch(n);
  const int size = static_cast<int>(n);
  RealFftPlans p{
      fftw_plan_dft_r2c_1d(size, scratch.real.get(), scratch.spec.get(), FFTW_ESTIMATE),
      fftw_plan_dft_c2r_1d(size, scratch.spec.get(), scratch.real.get(), FFTW_ESTIMATE)};
  return plans.emplace(n, p).first->second;
}

}  // namespace detail

}  // namespace beamkit
