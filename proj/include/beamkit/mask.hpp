// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "beamkit/signal_types.hpp"

namespace beamkit {

// Real S x T x F tensor.
class TfTensor {
 public:
  TfTensor() = default;
  TfTensor(std::size_t sources, std::size_t frames, std::size_t bins)
      : sources_(sources), frames_(frames), bins_(bins), data_(sources * frames * bins, 0.0) {}

  std::size_t sources() const { return sources_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }

  double& at(std::size_t s, std::size_t t, std::size_t f) {
    return data_[(s * frames_ + t) * bins_ + f];
  }
  double at(std::size_t s, std::size_t t, std::size_t f) const {
    return data_[(s * frames_ + t) * bins_ + f];
  }
  std::span<double> plane(std::size_t s) {
    return {data_.data() + s * frames_ * bins_, frames_ * bins_};
  }
  std::span<const double> plane(std::size_t s) const {
    return {data_.data() + s * frames_ * bins_, frames_ * bins_};
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const TfTensor&) const = default;

 private:
  std::size_t sources_ = 0;
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<double> data_;
};

// Per-source time-frequency masks with values in [0, 1].
class MaskTensor : public TfTensor {
 public:
  using TfTensor::TfTensor;
};

enum class OracleMaskKind { kWienerLike, kBinary };

inline constexpr double kDefaultMaskFloor = 1e-10;

// |X_s|^2 / (sum_s' |X_s'|^2 + floor). `estimates` carries one source per
// channel. Silent bins receive 0 for every source.
MaskTensor WienerLikeMask(const MultichannelSpectrogram& estimates,
                          double floor = kDefaultMaskFloor);

// |X_s|^2 for every source (channel) of `estimates`.
TfTensor PowerSpectra(const MultichannelSpectrogram& estimates);

// Masks from ground-truth reference-channel signals (one source per channel).
// Binary masks pick the loudest source per bin, ties to the lowest index.
MaskTensor OracleMasksFromSources(const MultichannelWaveform& sources, const StftConfig& config,
                                  OracleMaskKind kind);

// Elementwise product of each source mask with a single-channel mixture.
MultichannelSpectrogram ApplyMask(const MaskTensor& mask,
                                  const MultichannelSpectrogram& mixture_ref);

// Distributes the residual y - sum_s x_s uniformly over the sources so the
// estimates sum to the mixture.
MultichannelWaveform MixtureConsistencyProjection(const MultichannelWaveform& estimates,
                                                  std::span<const double> mixture_ref);

// Produces per-source time-domain estimates for one masking stage.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;

  virtual std::size_t num_sources() const = 0;

  // `stage` is 1-based. `prior_beamformed` holds the previous stage's
  // beamformed estimates (one source per channel) or is null for stage 1.
  // The result has one channel per source and the mixture's length.
  virtual MultichannelWaveform Estimate(int stage, std::span<const double> mixture_ref,
                                        int sample_rate,
                                        const MultichannelWaveform* prior_beamformed) = 0;
};

// Oracle masks computed from the reverberant reference-channel images and
// applied to the mixture reference channel in the masking STFT domain.
//
// With `beamformed_phase` set, later stages keep the oracle magnitude
// A * |Y_ref| but take the phase of the previous beamformer output wherever
// that output is nonzero, so that information flows between stages the way
// a network fed with beamformed estimates would use it.
class OracleMaskProvider : public MaskProvider {
 public:
  struct Options {
    OracleMaskKind kind = OracleMaskKind::kWienerLike;
    StftConfig stft = StftConfig::Masking();
    bool beamformed_phase = true;
  };

  OracleMaskProvider(MultichannelWaveform reference_images, Options options);

  std::size_t num_sources() const override { return references_.channels(); }
  MultichannelWaveform Estimate(int stage, std::span<const double> mixture_ref, int sample_rate,
                                const MultichannelWaveform* prior_beamformed) override;

 private:
  MultichannelWaveform references_;
  Options options_;
  MaskTensor masks_;
};

}  // namespace beamkit
