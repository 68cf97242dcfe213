// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "beamkit/signal_types.hpp"

namespace beamkit::testing {

inline MultichannelWaveform RandomWave(std::mt19937_64& rng, std::size_t channels,
                                       std::size_t length, int sample_rate = 16000) {
  std::normal_distribution<double> g(0.0, 1.0);
  MultichannelWaveform w(channels, length, sample_rate);
  for (double& v : w.samples()) v = g(rng);
  return w;
}

inline std::vector<Complex> RandomComplex(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& c : v) c = Complex(g(rng), g(rng));
  return v;
}

inline double MaxAbs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double RelativeError(std::span<const double> est, std::span<const double> ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num += (est[i] - ref[i]) * (est[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

}  // namespace beamkit::testing
