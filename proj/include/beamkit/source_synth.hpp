// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Synthetic stand-ins for dry source signals.

#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace beamkit {

// Voiced syllables (harmonic stack under a formant envelope) separated by
// short pauses, with occasional unvoiced bursts. Pitch is fixed per call.
std::vector<double> SynthesizeSpeechLike(std::mt19937_64& rng, std::size_t num_samples,
                                         int sample_rate);

// Band-limited noise switched on and off in bursts.
std::vector<double> SynthesizeNoiseBursts(std::mt19937_64& rng, std::size_t num_samples,
                                          int sample_rate);

}  // namespace beamkit
