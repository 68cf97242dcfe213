// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

#include "beamkit/signal_types.hpp"

namespace beamkit {

// Vorbis:    w[n] = sin(pi/2 * sin^2(pi (n + 0.5) / N))
// SqrtHann:  w[n] = sqrt(0.5 - 0.5 cos(2 pi (n + 0.5) / N))
std::vector<double> MakeWindow(WindowKind kind, std::size_t win_len);

// Frame count for a signal of `num_samples` samples. The signal is preceded
// by win_len - hop zeros and followed by enough zeros to fill the last frame.
std::size_t NumFrames(std::size_t num_samples, const StftConfig& config);

// Forward transform of every channel; output has fft_size / 2 + 1 bins.
MultichannelSpectrogram Stft(const MultichannelWaveform& wave, const StftConfig& config);

// Weighted overlap-add inverse: synthesis with the analysis window and
// division by the summed squared-window envelope, padding trimmed.
MultichannelWaveform Istft(const MultichannelSpectrogram& spec);

}  // namespace beamkit
