// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>

#include "beamkit/signal_types.hpp"

namespace beamkit {

enum class WavEncoding { kPcm16, kFloat32 };

// RIFF/WAVE reader for 16-bit PCM and 32-bit float (plain or extensible
// format chunks). Throws kParse on malformed files and kIo on open failure.
MultichannelWaveform ReadWav(const std::filesystem::path& path);

// PCM16 samples are clipped to [-1, 1] and scaled by 32767.
void WriteWav(const std::filesystem::path& path, const MultichannelWaveform& wave,
              WavEncoding encoding);

}  // namespace beamkit
