// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/mask.hpp"

#include <cmath>

#include "beamkit/error.hpp"
#include "beamkit/kernels.hpp"
#include "beamkit/stft.hpp"

namespace beamkit {

TfTensor PowerSpectra(const MultichannelSpectrogram& estimates) {
  TfTensor power(estimates.channels(), estimates.frames(), estimates.bins());
  for (std::size_t s = 0; s < estimates.channels(); ++s) {
    kernels::Abs2(estimates.channel(s), power.plane(s));
  }
  return power;
}

MaskTensor WienerLikeMask(const MultichannelSpectrogram& estimates, double floor) {
  BEAMKIT_REQUIRE(estimates.channels() >= 1, ErrorCode::kInvalidInput, "no source estimates");
  BEAMKIT_REQUIRE(floor >= 0.0, ErrorCode::kInvalidConfig, "mask floor must be non-negative");
  const std::size_t sources = estimates.channels();
  const std::size_t plane = estimates.frames() * estimates.bins();
  TfTensor power = PowerSpectra(estimates);
  std::vector<double> total(plane, 0.0);
  for (std::size_t s = 0; s < sources; ++s) {
    auto p = power.plane(s);
    for (std::size_t i = 0; i < plane; ++i) total[i] += p[i];
  }
  MaskTensor mask(sources, estimates.frames(), estimates.bins());
  for (std::size_t s = 0; s < sources; ++s) {
    auto p = power.plane(s);
    auto m = mask.plane(s);
    for (std::size_t i = 0; i < plane; ++i) {
      const double denom = total[i] + floor;
      m[i] = denom > 0.0 ? p[i] / denom : 0.0;
    }
  }
  return mask;
}

MaskTensor OracleMasksFromSources(const MultichannelWaveform& sources, const StftConfig& config,
                                  OracleMaskKind kind) {
  BEAMKIT_REQUIRE(sources.channels() >= 1 && sources.length() > 0, ErrorCode::kInvalidInput,
                  "oracle masks need at least one non-empty source");
  const MultichannelSpectrogram spec = Stft(sources, config);
  if (kind == OracleMaskKind::kWienerLike) return WienerLikeMask(spec);

  const TfTensor power = PowerSpectra(spec);
  MaskTensor mask(spec.channels(), spec.frames(), spec.bins());
  const std::size_t plane = spec.frames() * spec.bins();
  for (std::size_t i = 0; i < plane; ++i) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < spec.channels(); ++s) {
      if (power.plane(s)[i] > power.plane(best)[i]) best = s;
    }
    mask.plane(best)[i] = 1.0;
  }
  return mask;
}

MultichannelSpectrogram ApplyMask(const MaskTensor& mask,
                                  const MultichannelSpectrogram& mixture_ref) {
  BEAMKIT_REQUIRE(mixture_ref.channels() == 1, ErrorCode::kShape,
                  "mask application expects a single-channel mixture");
  BEAMKIT_REQUIRE(mask.frames() == mixture_ref.frames() && mask.bins() == mixture_ref.bins(),
                  ErrorCode::kShape, "mask and mixture differ in shape");
  MultichannelSpectrogram out(mask.sources(), mixture_ref.frames(), mixture_ref.config(),
                              mixture_ref.num_samples());
  for (std::size_t s = 0; s < mask.sources(); ++s) {
    kernels::ScaleByReal(mixture_ref.channel(0), mask.plane(s), out.channel(s));
  }
  return out;
}

MultichannelWaveform MixtureConsistencyProjection(const MultichannelWaveform& estimates,
                                                  std::span<const double> mixture_ref) {
  BEAMKIT_REQUIRE(estimates.channels() >= 1, ErrorCode::kInvalidInput, "no estimates");
  BEAMKIT_REQUIRE(estimates.length() == mixture_ref.size(), ErrorCode::kShape,
                  "estimates and mixture differ in length");
  const std::size_t sources = estimates.channels();
  const double share = 1.0 / static_cast<double>(sources);
  MultichannelWaveform out = estimates;
  for (std::size_t n = 0; n < estimates.length(); ++n) {
    double sum = 0.0;
    for (std::size_t s = 0; s < sources; ++s) sum += estimates.at(s, n);
    const double correction = (mixture_ref[n] - sum) * share;
    for (std::size_t s = 0; s < sources; ++s) out.at(s, n) += correction;
  }
  return out;
}

OracleMaskProvider::OracleMaskProvider(MultichannelWaveform reference_images, Options options)
    : references_(std::move(reference_images)), options_(options) {
  options_.stft.Validate();
  masks_ = OracleMasksFromSources(references_, options_.stft, options_.kind);
}

MultichannelWaveform OracleMaskProvider::Estimate(int /*stage*/,
                                                  std::span<const double> mixture_ref,
                                                  int sample_rate,
                                                  const MultichannelWaveform* prior_beamformed) {
  BEAMKIT_REQUIRE(mixture_ref.size() == references_.length(), ErrorCode::kShape,
                  "mixture and oracle references differ in length");
  MultichannelWaveform mix(1, mixture_ref.size(), sample_rate);
  std::copy(mixture_ref.begin(), mixture_ref.end(), mix.channel(0).begin());
  const MultichannelSpectrogram mix_spec = Stft(mix, options_.stft);
  MultichannelSpectrogram estimates = ApplyMask(masks_, mix_spec);

  if (options_.beamformed_phase && prior_beamformed != nullptr) {
    BEAMKIT_REQUIRE(prior_beamformed->channels() == num_sources() &&
                        prior_beamformed->length() == mixture_ref.size(),
                    ErrorCode::kShape, "beamformed estimates do not match the sources");
    const MultichannelSpectrogram bf = Stft(*prior_beamformed, options_.stft);
    for (std::size_t s = 0; s < num_sources(); ++s) {
      auto est = estimates.channel(s);
      auto phase_src = bf.channel(s);
      for (std::size_t i = 0; i < est.size(); ++i) {
        const double mag = std::abs(phase_src[i]);
        if (mag > 0.0) est[i] = std::abs(est[i]) * (phase_src[i] / mag);
      }
    }
  }
  return Istft(estimates);
}

}  // namespace beamkit
