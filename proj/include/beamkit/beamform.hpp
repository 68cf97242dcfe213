// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Multi-frame multichannel Wiener filtering driven by time-frequency masks.
//
// Context frames are treated as extra microphones: the observation at (t, f)
// is the frame-major stack [Y_{t-a}; ...; Y_t; ...; Y_{t+b}] of length c*M,
// with zeros for frames outside the utterance. Time-invariant (TI) filters
// use one weight vector per frequency, time-varying factorized (TVF) filters
// one per (t, f), and block processing re-estimates TI or TVF filters in
// half-overlapping Vorbis-windowed blocks of frames.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "beamkit/mask.hpp"
#include "beamkit/signal_types.hpp"

namespace beamkit {

inline constexpr double kDefaultLoading = 1e-4;

struct ContextConfig {
  std::size_t left = 0;   // a
  std::size_t right = 0;  // b

  std::size_t total() const { return left + right + 1; }
  // Centred context of `total` frames; for even totals the left side gets
  // the extra frame (4 -> a=2, b=1).
  static ContextConfig FromTotal(std::size_t total);

  bool operator==(const ContextConfig&) const = default;
};

class ContextSpectrogram {
 public:
  ContextSpectrogram() = default;
  ContextSpectrogram(std::size_t mics, std::size_t frames, ContextConfig ctx,
                     const StftConfig& config, std::size_t num_samples);

  std::size_t mics() const { return mics_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t dim() const { return ctx_.total() * mics_; }
  const ContextConfig& context() const { return ctx_; }
  const StftConfig& config() const { return config_; }
  std::size_t num_samples() const { return num_samples_; }

  // Stored frequency-major so that per-frequency work reads contiguously.
  std::span<Complex> vec(std::size_t t, std::size_t f) {
    return {data_.data() + (f * frames_ + t) * dim(), dim()};
  }
  std::span<const Complex> vec(std::size_t t, std::size_t f) const {
    return {data_.data() + (f * frames_ + t) * dim(), dim()};
  }

 private:
  std::size_t mics_ = 0;
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::size_t num_samples_ = 0;
  ContextConfig ctx_;
  StftConfig config_;
  std::vector<Complex> data_;
};

ContextSpectrogram ExpandContext(const MultichannelSpectrogram& spec, const ContextConfig& ctx);

enum class CovarianceKind { kMixture, kSource };

// Hermitian dim x dim matrices, one per frequency (time-invariant) or one per
// (t, f) when frames() > 0.
class CovarianceField {
 public:
  CovarianceField() = default;
  CovarianceField(std::size_t dim, std::size_t bins, std::size_t frames, CovarianceKind kind,
                  double loading = 0.0);

  std::size_t dim() const { return dim_; }
  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  bool time_varying() const { return frames_ > 0; }
  CovarianceKind kind() const { return kind_; }
  double loading() const { return loading_; }

  std::span<Complex> matrix(std::size_t f) { return {data_.data() + f * dim_ * dim_, dim_ * dim_}; }
  std::span<const Complex> matrix(std::size_t f) const {
    return {data_.data() + f * dim_ * dim_, dim_ * dim_};
  }
  std::span<Complex> matrix(std::size_t t, std::size_t f) { return matrix(f * frames_ + t); }
  std::span<const Complex> matrix(std::size_t t, std::size_t f) const {
    return matrix(f * frames_ + t);
  }
  Complex& at(std::size_t f, std::size_t i, std::size_t j) { return data_[(f * dim_ + i) * dim_ + j]; }
  const Complex& at(std::size_t f, std::size_t i, std::size_t j) const {
    return data_[(f * dim_ + i) * dim_ + j];
  }

 private:
  std::size_t dim_ = 0;
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  CovarianceKind kind_ = CovarianceKind::kMixture;
  double loading_ = 0.0;
  std::vector<Complex> data_;
};

struct Covariances {
  CovarianceField mixture;
  std::vector<CovarianceField> sources;
};

// Frame range [begin, end) with per-frame weights replacing the 1/T average
// by a normalized weighted average. Empty weights mean uniform.
struct FrameWeighting {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::span<const double> weights;
};

// Mixture covariance (1/T) sum_t Y Y^H and per-source covariances
// (1/T) sum_t A_s Y Y^H, Hermitian symmetry enforced.
Covariances EstimateCovariances(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                std::optional<FrameWeighting> weighting = std::nullopt);

// One-hot selector of the reference microphone at the centre context frame.
struct RefSelector {
  std::size_t dim = 1;
  std::size_t ref_channel = 0;
  std::size_t center_offset = 0;
  std::size_t mics = 1;

  RefSelector(std::size_t mics, const ContextConfig& ctx, std::size_t ref_channel);
  std::size_t position() const { return center_offset * mics + ref_channel; }
  std::vector<Complex> vector() const;
};

class WeightField {
 public:
  WeightField() = default;
  WeightField(std::size_t dim, std::size_t bins, std::size_t frames = 0);

  std::size_t dim() const { return dim_; }
  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  std::span<Complex> weights(std::size_t f) { return {w_.data() + f * dim_, dim_}; }
  std::span<const Complex> weights(std::size_t f) const { return {w_.data() + f * dim_, dim_}; }
  std::span<Complex> weights(std::size_t t, std::size_t f) { return weights(f * frames_ + t); }
  std::span<const Complex> weights(std::size_t t, std::size_t f) const {
    return weights(f * frames_ + t);
  }
  // Indices (f, or f * frames + t) where the solve failed and w = u was used.
  const std::vector<std::size_t>& fallbacks() const { return fallbacks_; }
  std::vector<std::size_t>& fallbacks() { return fallbacks_; }

 private:
  std::size_t dim_ = 0;
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::vector<Complex> w_;
  std::vector<std::size_t> fallbacks_;
};

// Solves (Phi_y + delta (tr/dim) I) w = Phi_s u per frequency.
WeightField TiMcwfWeights(const CovarianceField& mixture_cov, const CovarianceField& source_cov,
                          const RefSelector& u, double loading = kDefaultLoading);

// w^H Y per (t, f); returns a single-channel spectrogram.
MultichannelSpectrogram ApplyWeightsTi(const WeightField& weights,
                                       const ContextSpectrogram& ctx_spec);

struct Normalization {
  enum class Kind { kFullDiagonal, kFarField };
  Kind kind = Kind::kFullDiagonal;
  // Index into the stacked observation used by kFarField.
  std::size_t index = 0;

  static Normalization FullDiagonal() { return {}; }
  static Normalization FarField(std::size_t index) { return {Kind::kFarField, index}; }
};

// Unit-normalized spatial coherence Psi / D per frequency.
CovarianceField SpatialCoherence(const CovarianceField& spatial, const Normalization& norm);

// |X_s|^2 * Psi / D for every (t, f). `psd` is a single-source plane (T x F).
CovarianceField TvfSourceCovariance(std::span<const double> psd, std::size_t frames,
                                    const CovarianceField& spatial, const Normalization& norm);

// Per (t, f): Phi_y = sum_s Phi_s, load, solve, apply. Returns one channel
// per source.
MultichannelSpectrogram TvfMcwf(const std::vector<CovarianceField>& sources_tv_cov,
                                const RefSelector& u, double loading,
                                const ContextSpectrogram& ctx_spec);

// Factorized form of TvfMcwf that never materializes the per-(t, f)
// matrices: Phi_s(t, f) = psd_s(t, f) * coherence_s(f).
MultichannelSpectrogram TvfMcwfFactorized(const TfTensor& psd,
                                          const std::vector<CovarianceField>& coherence,
                                          const RefSelector& u, double loading,
                                          const ContextSpectrogram& ctx_spec);

enum class BeamformMode { kTimeInvariant, kTimeVaryingFactorized };

struct BeamformOptions {
  BeamformMode mode = BeamformMode::kTimeInvariant;
  double loading = kDefaultLoading;
  Normalization normalization;
  // Block length in frames; nullopt or >= T processes the whole utterance.
  std::optional<std::size_t> block_frames;
};

// Full separation step in the beamforming STFT domain. `masks` drive the
// spatial statistics; `psd` (required for TVF) holds |X_s|^2 of the source
// estimates. Returns one channel per source.
MultichannelSpectrogram Beamform(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                 const TfTensor* psd, const RefSelector& u,
                                 const BeamformOptions& options);

// Block processing: half-overlapping blocks starting at k*L/2 - L/2, Vorbis
// weights v on covariance accumulation, filters applied to v-windowed
// frames and post-windowed by v, then overlap-added.
MultichannelSpectrogram BlockBeamform(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                      const TfTensor* psd, const RefSelector& u,
                                      const BeamformOptions& options);

}  // namespace beamkit
