// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/source_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace beamkit {

namespace {

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Raised-cosine ramps at both ends of a segment of `len` samples.
double SegmentEnvelope(std::size_t i, std::size_t len, std::size_t ramp) {
  ramp = std::min(ramp, len / 2);
  if (ramp == 0) return 1.0;
  if (i < ramp) return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / ramp);
  if (i + ramp >= len) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(len - 1 - i) / ramp);
  }
  return 1.0;
}

// Two-pole resonator, normalized to roughly unit peak gain.
struct Resonator {
  double a1 = 0.0, a2 = 0.0, gain = 1.0;
  double y1 = 0.0, y2 = 0.0;

  Resonator(double freq, double bandwidth, int sample_rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth / sample_rate);
    a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / sample_rate);
    a2 = -r * r;
    gain = 1.0 - r;
  }
  double Step(double x) {
    const double y = gain * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

double FormantGain(double f, const std::array<double, 3>& formants) {
  double g = 0.0;
  for (double fc : formants) {
    const double d = (f - fc) / (0.12 * fc + 60.0);
    g += std::exp(-0.5 * d * d);
  }
  return g + 0.02;
}

}  // namespace

std::vector<double> SynthesizeSpeechLike(std::mt19937_64& rng, std::size_t num_samples,
                                         int sample_rate) {
  std::vector<double> out(num_samples, 0.0);
  const double sr = sample_rate;
  const double f0_base = Uniform(rng, 90.0, 220.0);
  std::normal_distribution<double> white(0.0, 1.0);
  std::size_t pos = static_cast<std::size_t>(Uniform(rng, 0.0, 0.3) * sr);
  while (pos < num_samples) {
    const auto len = static_cast<std::size_t>(Uniform(rng, 0.12, 0.35) * sr);
    const std::array<double, 3> formants{Uniform(rng, 300.0, 900.0), Uniform(rng, 900.0, 2300.0),
                                         Uniform(rng, 2300.0, 3400.0)};
    const double f0_start = f0_base * Uniform(rng, 0.9, 1.15);
    const double f0_end = f0_base * Uniform(rng, 0.8, 1.1);
    const double level = Uniform(rng, 0.4, 1.0);
    const bool unvoiced = Uniform(rng, 0.0, 1.0) < 0.2;
    const std::size_t ramp = static_cast<std::size_t>(0.015 * sr);
    if (unvoiced) {
      Resonator hiss(Uniform(rng, 3000.0, 6000.0), 1500.0, sample_rate);
      for (std::size_t i = 0; i < len && pos + i < num_samples; ++i) {
        out[pos + i] += 0.5 * level * SegmentEnvelope(i, len, ramp) * hiss.Step(white(rng)) * 4.0;
      }
    } else {
      double phase = 0.0;
      for (std::size_t i = 0; i < len && pos + i < num_samples; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(len);
        const double f0 = f0_start + (f0_end - f0_start) * frac;
        phase += 2.0 * std::numbers::pi * f0 / sr;
        double v = 0.0;
        for (int h = 1; h * f0 < 0.45 * sr && h <= 40; ++h) {
          v += FormantGain(h * f0, formants) * std::sin(h * phase) / std::sqrt(static_cast<double>(h));
        }
        out[pos + i] += level * SegmentEnvelope(i, len, ramp) * v * 0.3;
      }
    }
    pos += len + static_cast<std::size_t>(Uniform(rng, 0.03, 0.25) * sr);
  }
  return out;
}

std::vector<double> SynthesizeNoiseBursts(std::mt19937_64& rng, std::size_t num_samples,
                                          int sample_rate) {
  std::vector<double> out(num_samples, 0.0);
  const double sr = sample_rate;
  std::normal_distribution<double> white(0.0, 1.0);
  Resonator band(Uniform(rng, 200.0, 4000.0), Uniform(rng, 200.0, 2000.0), sample_rate);
  std::size_t pos = 0;
  while (pos < num_samples) {
    const auto on = static_cast<std::size_t>(Uniform(rng, 0.3, 1.5) * sr);
    const auto off = static_cast<std::size_t>(Uniform(rng, 0.05, 0.6) * sr);
    const double level = Uniform(rng, 0.5, 1.0);
    const std::size_t ramp = static_cast<std::size_t>(0.02 * sr);
    for (std::size_t i = 0; i < on && pos + i < num_samples; ++i) {
      out[pos + i] = level * SegmentEnvelope(i, on, ramp) * band.Step(white(rng)) * 3.0;
    }
    pos += on + off;
  }
  return out;
}

}  // namespace beamkit
