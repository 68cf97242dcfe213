// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "beamkit/signal_types.hpp"

namespace beamkit {

struct LossConfig {
  double tau = 1e-3;
  double epsilon = 1e-8;
  bool permutation_invariant = true;

  void Validate() const;
};

inline constexpr double kSiSnrClampDb = 60.0;

// 10 log10(|x|^2 / (|x - xhat|^2 + tau |x|^2 + eps))
double SnrStabilized(std::span<const double> estimate, std::span<const double> reference,
                     const LossConfig& cfg = {});

struct LossResult {
  double loss = 0.0;
  // permutation[s] is the estimate index paired with reference s.
  std::vector<std::size_t> permutation;
};

// Minimum over permutations of sum_s -SNR(estimate[pi(s)], reference[s]).
// Sources are the channels of both waveforms; at most 6 sources.
LossResult SequenceLoss(const MultichannelWaveform& estimates,
                        const MultichannelWaveform& references, const LossConfig& cfg = {});

// Scale-invariant SNR in dB after mean removal, clamped to [-60, 60].
double SiSnr(std::span<const double> estimate, std::span<const double> reference);

struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct MetricReport {
  std::vector<double> si_snr;            // per reference source, dB
  std::vector<double> si_snri;           // per reference source, dB
  std::vector<double> mixture_si_snr;    // baseline per reference source, dB
  std::vector<std::size_t> permutation;  // estimate index matched to each reference

  double mean_si_snri() const;
};

// Picks the estimate permutation maximizing summed SI-SNR (identity when
// `permutation_invariant` is false) and reports the improvement over the
// unprocessed mixture. `range` restricts scoring to a sample interval.
MetricReport Evaluate(const MultichannelWaveform& estimates,
                      const MultichannelWaveform& references,
                      std::span<const double> mixture_ref, bool permutation_invariant = true,
                      std::optional<SampleRange> range = std::nullopt);

}  // namespace beamkit
