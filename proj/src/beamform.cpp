// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/beamform.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>

#include "beamkit/error.hpp"
#include "beamkit/hermitian_solve.hpp"
#include "beamkit/kernels.hpp"
#include "beamkit/stft.hpp"

namespace beamkit {

namespace {

// Every iteration writes only to its own bin, so results do not depend on
// scheduling.
template <typename Fn>
void ParallelForBins(std::size_t bins, Fn&& fn) {
  const long n = static_cast<long>(bins);
#pragma omp parallel for schedule(dynamic, 4)
  for (long f = 0; f < n; ++f) fn(static_cast<std::size_t>(f));
}

void SymmetrizeHermitian(std::span<Complex> a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = a[i * n + i].real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a[i * n + j] + std::conj(a[j * n + i]));
      a[i * n + j] = avg;
      a[j * n + i] = std::conj(avg);
    }
  }
}

void RequireMasksMatch(const ContextSpectrogram& ctx_spec, const TfTensor& masks,
                       const char* what) {
  BEAMKIT_REQUIRE(masks.frames() == ctx_spec.frames() && masks.bins() == ctx_spec.bins(),
                  ErrorCode::kShape, std::string(what) + " do not match the spectrogram");
}

Covariances AccumulateCovariances(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                  const std::optional<FrameWeighting>& weighting,
                                  bool with_mixture) {
  RequireMasksMatch(ctx_spec, masks, "masks");
  const std::size_t dim = ctx_spec.dim();
  const std::size_t bins = ctx_spec.bins();
  const std::size_t sources = masks.sources();
  std::size_t begin = 0;
  std::size_t end = ctx_spec.frames();
  if (weighting) {
    begin = weighting->begin;
    end = weighting->end;
    BEAMKIT_REQUIRE(begin <= end && end <= ctx_spec.frames(), ErrorCode::kShape,
                    "frame range outside the spectrogram");
    BEAMKIT_REQUIRE(weighting->weights.empty() || weighting->weights.size() == end - begin,
                    ErrorCode::kShape, "frame weights do not match the frame range");
  }
  auto weight_of = [&](std::size_t t) {
    return (weighting && !weighting->weights.empty()) ? weighting->weights[t - begin] : 1.0;
  };
  double total = 0.0;
  for (std::size_t t = begin; t < end; ++t) total += weight_of(t);
  const double norm = total > 0.0 ? 1.0 / total : 0.0;

  Covariances out;
  if (with_mixture) out.mixture = CovarianceField(dim, bins, 0, CovarianceKind::kMixture);
  out.sources.reserve(sources);
  for (std::size_t s = 0; s < sources; ++s) {
    out.sources.emplace_back(dim, bins, 0, CovarianceKind::kSource);
  }
  const auto& kt = kernels::Active();
  ParallelForBins(bins, [&](std::size_t f) {
    for (std::size_t t = begin; t < end; ++t) {
      const double w = weight_of(t) * norm;
      const Complex* y = ctx_spec.vec(t, f).data();
      if (with_mixture) kt.accumulate_outer(y, dim, w, out.mixture.matrix(f).data());
      for (std::size_t s = 0; s < sources; ++s) {
        const double a = masks.at(s, t, f);
        if (a != 0.0) kt.accumulate_outer(y, dim, w * a, out.sources[s].matrix(f).data());
      }
    }
    if (with_mixture) SymmetrizeHermitian(out.mixture.matrix(f), dim);
    for (std::size_t s = 0; s < sources; ++s) SymmetrizeHermitian(out.sources[s].matrix(f), dim);
  });
  return out;
}

// Psi / D into `out`. Returns false when a diagonal entry used for the
// normalization is not strictly positive.
bool NormalizeCoherence(std::span<const Complex> psi, std::size_t n, const Normalization& norm,
                        std::span<Complex> out) {
  if (norm.kind == Normalization::Kind::kFarField) {
    BEAMKIT_REQUIRE(norm.index < n, ErrorCode::kInvalidConfig,
                    "far-field normalization index out of range");
    const double ref = psi[norm.index * n + norm.index].real();
    if (!(ref > 0.0)) return false;
    for (std::size_t i = 0; i < n * n; ++i) out[i] = psi[i] / ref;
    return true;
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diag = psi[i * n + i].real();
    if (!(diag > 0.0)) return false;
    d[i] = std::sqrt(diag);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = psi[i * n + j] / (d[i] * d[j]);
  }
  return true;
}

// Loaded, normalized coherence for the factorized filters. Bins where the
// source has no energy at all get the identity; their PSD is zero too.
std::vector<CovarianceField> LoadedCoherence(const std::vector<CovarianceField>& spatial,
                                             const Normalization& norm, double loading) {
  std::vector<CovarianceField> coherence;
  for (const auto& psi : spatial) {
    const std::size_t n = psi.dim();
    CovarianceField c(n, psi.bins(), 0, CovarianceKind::kSource, loading);
    std::vector<Complex> loaded(n * n);
    for (std::size_t f = 0; f < psi.bins(); ++f) {
      auto src = psi.matrix(f);
      std::copy(src.begin(), src.end(), loaded.begin());
      LoadDiagonal(loaded, n, loading);
      if (!NormalizeCoherence(loaded, n, norm, c.matrix(f))) {
        auto dst = c.matrix(f);
        std::fill(dst.begin(), dst.end(), Complex{});
        for (std::size_t i = 0; i < n; ++i) dst[i * n + i] = 1.0;
      }
    }
    coherence.push_back(std::move(c));
  }
  return coherence;
}

struct SolveScratch {
  explicit SolveScratch(std::size_t dim) : mix(dim * dim), rhs(dim) {}
  std::vector<Complex> mix;
  std::vector<Complex> rhs;
};

// Per-(t, f) TVF filter over frames [begin, end). Source s's covariance at
// (t, f) is produced by `source_matrix(s, t, f, dst)`. Outputs are
// accumulated into `out` scaled by gains[t - begin] (1 when empty).
template <typename SourceMatrixFn>
std::size_t TvfRange(std::size_t sources, SourceMatrixFn&& source_matrix, const RefSelector& u,
                     double loading, const ContextSpectrogram& ctx_spec, std::size_t begin,
                     std::size_t end, std::span<const double> gains,
                     MultichannelSpectrogram& out) {
  const std::size_t dim = ctx_spec.dim();
  const std::size_t pos = u.position();
  std::vector<std::size_t> fallback_counts(ctx_spec.bins(), 0);
  std::atomic<bool> non_finite{false};
  const auto& kt = kernels::Active();
  ParallelForBins(ctx_spec.bins(), [&](std::size_t f) {
    SolveScratch scratch(dim);
    std::vector<std::vector<Complex>> phi(sources, std::vector<Complex>(dim * dim));
    for (std::size_t t = begin; t < end; ++t) {
      const double gain = gains.empty() ? 1.0 : gains[t - begin];
      std::fill(scratch.mix.begin(), scratch.mix.end(), Complex{});
      for (std::size_t s = 0; s < sources; ++s) {
        source_matrix(s, t, f, std::span<Complex>(phi[s]));
        for (std::size_t i = 0; i < dim * dim; ++i) scratch.mix[i] += phi[s][i];
      }
      if (!AllFinite(scratch.mix)) {
        non_finite = true;
        continue;
      }
      LoadDiagonal(scratch.mix, dim, loading);
      const bool ok = CholeskyFactor(scratch.mix, dim);
      const Complex* y = ctx_spec.vec(t, f).data();
      if (!ok) ++fallback_counts[f];
      for (std::size_t s = 0; s < sources; ++s) {
        Complex value;
        if (ok) {
          for (std::size_t i = 0; i < dim; ++i) scratch.rhs[i] = phi[s][i * dim + pos];
          CholeskySolve(scratch.mix, dim, scratch.rhs);
          value = kt.dot_conj(scratch.rhs.data(), y, dim);
        } else {
          value = y[pos];
        }
        out.at(s, t, f) += gain * value;
      }
    }
  });
  BEAMKIT_REQUIRE(!non_finite, ErrorCode::kNumerical, "non-finite time-varying covariance");
  std::size_t total = 0;
  for (std::size_t c : fallback_counts) total += c;
  if (total > 0) {
    spdlog::debug("tvf-mcwf: {} time-frequency bins fell back to pass-through", total);
  }
  return total;
}

}  // namespace

ContextConfig ContextConfig::FromTotal(std::size_t total) {
  BEAMKIT_REQUIRE(total >= 1, ErrorCode::kInvalidConfig, "context size must be >= 1");
  ContextConfig ctx;
  ctx.right = (total - 1) / 2;
  ctx.left = total - 1 - ctx.right;
  return ctx;
}

ContextSpectrogram::ContextSpectrogram(std::size_t mics, std::size_t frames, ContextConfig ctx,
                                       const StftConfig& config, std::size_t num_samples)
    : mics_(mics), frames_(frames), bins_(config.num_bins()), num_samples_(num_samples),
      ctx_(ctx), config_(config), data_(frames * bins_ * ctx.total() * mics) {}

ContextSpectrogram ExpandContext(const MultichannelSpectrogram& spec, const ContextConfig& ctx) {
  BEAMKIT_REQUIRE(spec.channels() >= 1, ErrorCode::kShape, "spectrogram has no channels");
  const std::size_t mics = spec.channels();
  const std::size_t frames = spec.frames();
  ContextSpectrogram out(mics, frames, ctx, spec.config(), spec.num_samples());
  const auto left = static_cast<std::ptrdiff_t>(ctx.left);
  for (std::size_t f = 0; f < spec.bins(); ++f) {
    for (std::size_t t = 0; t < frames; ++t) {
      auto v = out.vec(t, f);
      for (std::size_t k = 0; k < ctx.total(); ++k) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - left;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(frames)) continue;
        for (std::size_t m = 0; m < mics; ++m) {
          v[k * mics + m] = spec.at(m, static_cast<std::size_t>(src), f);
        }
      }
    }
  }
  return out;
}

CovarianceField::CovarianceField(std::size_t dim, std::size_t bins, std::size_t frames,
                                 CovarianceKind kind, double loading)
    : dim_(dim), bins_(bins), frames_(frames), kind_(kind), loading_(loading),
      data_(dim * dim * bins * std::max<std::size_t>(frames, 1)) {}

Covariances EstimateCovariances(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                std::optional<FrameWeighting> weighting) {
  return AccumulateCovariances(ctx_spec, masks, weighting, true);
}

RefSelector::RefSelector(std::size_t mics_in, const ContextConfig& ctx, std::size_t ref)
    : dim(ctx.total() * mics_in), ref_channel(ref), center_offset(ctx.left), mics(mics_in) {
  BEAMKIT_REQUIRE(ref < mics_in, ErrorCode::kInvalidConfig, "reference channel out of range");
}

std::vector<Complex> RefSelector::vector() const {
  std::vector<Complex> u(dim);
  u[position()] = 1.0;
  return u;
}

WeightField::WeightField(std::size_t dim, std::size_t bins, std::size_t frames)
    : dim_(dim), bins_(bins), frames_(frames),
      w_(dim * bins * std::max<std::size_t>(frames, 1)) {}

WeightField TiMcwfWeights(const CovarianceField& mixture_cov, const CovarianceField& source_cov,
                          const RefSelector& u, double loading) {
  BEAMKIT_REQUIRE(mixture_cov.dim() == source_cov.dim() && mixture_cov.bins() == source_cov.bins(),
                  ErrorCode::kShape, "mixture and source covariances differ in shape");
  BEAMKIT_REQUIRE(u.dim == mixture_cov.dim(), ErrorCode::kShape,
                  "reference selector does not match the covariance size");
  BEAMKIT_REQUIRE(loading >= 0.0, ErrorCode::kInvalidConfig, "loading must be non-negative");
  const std::size_t dim = mixture_cov.dim();
  const std::size_t pos = u.position();
  WeightField field(dim, mixture_cov.bins());
  std::vector<char> failed(mixture_cov.bins(), 0);
  std::atomic<bool> non_finite{false};
  ParallelForBins(mixture_cov.bins(), [&](std::size_t f) {
    auto mix = mixture_cov.matrix(f);
    auto src = source_cov.matrix(f);
    if (!AllFinite(mix) || !AllFinite(src)) {
      non_finite = true;
      return;
    }
    std::vector<Complex> a(mix.begin(), mix.end());
    LoadDiagonal(a, dim, loading);
    auto w = field.weights(f);
    if (!CholeskyFactor(a, dim)) {
      failed[f] = 1;
      std::fill(w.begin(), w.end(), Complex{});
      w[pos] = 1.0;
      return;
    }
    for (std::size_t i = 0; i < dim; ++i) w[i] = src[i * dim + pos];
    CholeskySolve(a, dim, w);
  });
  BEAMKIT_REQUIRE(!non_finite, ErrorCode::kNumerical, "non-finite covariance entries");
  for (std::size_t f = 0; f < failed.size(); ++f) {
    if (failed[f]) field.fallbacks().push_back(f);
  }
  if (!field.fallbacks().empty()) {
    spdlog::debug("ti-mcwf: {} of {} frequencies fell back to pass-through",
                  field.fallbacks().size(), mixture_cov.bins());
  }
  return field;
}

MultichannelSpectrogram ApplyWeightsTi(const WeightField& weights,
                                       const ContextSpectrogram& ctx_spec) {
  BEAMKIT_REQUIRE(weights.dim() == ctx_spec.dim() && weights.bins() == ctx_spec.bins(),
                  ErrorCode::kShape, "weights do not match the context spectrogram");
  MultichannelSpectrogram out(1, ctx_spec.frames(), ctx_spec.config(), ctx_spec.num_samples());
  const auto& kt = kernels::Active();
  ParallelForBins(ctx_spec.bins(), [&](std::size_t f) {
    const Complex* w = weights.weights(f).data();
    for (std::size_t t = 0; t < ctx_spec.frames(); ++t) {
      out.at(0, t, f) = kt.dot_conj(w, ctx_spec.vec(t, f).data(), ctx_spec.dim());
    }
  });
  return out;
}

CovarianceField SpatialCoherence(const CovarianceField& spatial, const Normalization& norm) {
  BEAMKIT_REQUIRE(!spatial.time_varying(), ErrorCode::kInvalidInput,
                  "spatial covariance must be time-invariant");
  CovarianceField out(spatial.dim(), spatial.bins(), 0, CovarianceKind::kSource,
                      spatial.loading());
  for (std::size_t f = 0; f < spatial.bins(); ++f) {
    BEAMKIT_REQUIRE(NormalizeCoherence(spatial.matrix(f), spatial.dim(), norm, out.matrix(f)),
                    ErrorCode::kNumerical, "spatial covariance has a zero diagonal entry");
  }
  return out;
}

CovarianceField TvfSourceCovariance(std::span<const double> psd, std::size_t frames,
                                    const CovarianceField& spatial, const Normalization& norm) {
  BEAMKIT_REQUIRE(psd.size() == frames * spatial.bins(), ErrorCode::kShape,
                  "psd does not match frames x bins");
  const CovarianceField coherence = SpatialCoherence(spatial, norm);
  const std::size_t dim = spatial.dim();
  const std::size_t bins = spatial.bins();
  CovarianceField out(dim, bins, frames, CovarianceKind::kSource, spatial.loading());
  for (std::size_t f = 0; f < bins; ++f) {
    auto c = coherence.matrix(f);
    for (std::size_t t = 0; t < frames; ++t) {
      const double p = psd[t * bins + f];
      auto dst = out.matrix(t, f);
      for (std::size_t i = 0; i < dim * dim; ++i) dst[i] = p * c[i];
    }
  }
  return out;
}

MultichannelSpectrogram TvfMcwf(const std::vector<CovarianceField>& sources_tv_cov,
                                const RefSelector& u, double loading,
                                const ContextSpectrogram& ctx_spec) {
  BEAMKIT_REQUIRE(!sources_tv_cov.empty(), ErrorCode::kInvalidInput, "no source covariances");
  for (const auto& cov : sources_tv_cov) {
    BEAMKIT_REQUIRE(cov.time_varying() && cov.dim() == ctx_spec.dim() &&
                        cov.bins() == ctx_spec.bins() && cov.frames() == ctx_spec.frames(),
                    ErrorCode::kShape, "time-varying covariances do not match the spectrogram");
  }
  BEAMKIT_REQUIRE(u.dim == ctx_spec.dim(), ErrorCode::kShape, "reference selector size");
  MultichannelSpectrogram out(sources_tv_cov.size(), ctx_spec.frames(), ctx_spec.config(),
                              ctx_spec.num_samples());
  auto source_matrix = [&](std::size_t s, std::size_t t, std::size_t f, std::span<Complex> dst) {
    auto src = sources_tv_cov[s].matrix(t, f);
    std::copy(src.begin(), src.end(), dst.begin());
  };
  TvfRange(sources_tv_cov.size(), source_matrix, u, loading, ctx_spec, 0, ctx_spec.frames(), {},
           out);
  return out;
}

MultichannelSpectrogram TvfMcwfFactorized(const TfTensor& psd,
                                          const std::vector<CovarianceField>& coherence,
                                          const RefSelector& u, double loading,
                                          const ContextSpectrogram& ctx_spec) {
  RequireMasksMatch(ctx_spec, psd, "power spectra");
  BEAMKIT_REQUIRE(coherence.size() == psd.sources(), ErrorCode::kShape,
                  "one coherence field per source required");
  MultichannelSpectrogram out(psd.sources(), ctx_spec.frames(), ctx_spec.config(),
                              ctx_spec.num_samples());
  const std::size_t dim = ctx_spec.dim();
  auto source_matrix = [&](std::size_t s, std::size_t t, std::size_t f, std::span<Complex> dst) {
    const double p = psd.at(s, t, f);
    auto c = coherence[s].matrix(f);
    for (std::size_t i = 0; i < dim * dim; ++i) dst[i] = p * c[i];
  };
  TvfRange(psd.sources(), source_matrix, u, loading, ctx_spec, 0, ctx_spec.frames(), {}, out);
  return out;
}

namespace {

MultichannelSpectrogram BeamformFull(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                     const TfTensor* psd, const RefSelector& u,
                                     const BeamformOptions& options) {
  const std::size_t sources = masks.sources();
  if (options.mode == BeamformMode::kTimeInvariant) {
    const Covariances covs = EstimateCovariances(ctx_spec, masks);
    MultichannelSpectrogram out(sources, ctx_spec.frames(), ctx_spec.config(),
                                ctx_spec.num_samples());
    for (std::size_t s = 0; s < sources; ++s) {
      const WeightField w = TiMcwfWeights(covs.mixture, covs.sources[s], u, options.loading);
      const MultichannelSpectrogram single = ApplyWeightsTi(w, ctx_spec);
      auto src = single.channel(0);
      std::copy(src.begin(), src.end(), out.channel(s).begin());
    }
    return out;
  }
  BEAMKIT_REQUIRE(psd != nullptr, ErrorCode::kInvalidInput,
                  "time-varying beamforming needs source power spectra");
  const Covariances covs = AccumulateCovariances(ctx_spec, masks, std::nullopt, false);
  const auto coherence = LoadedCoherence(covs.sources, options.normalization, options.loading);
  // The coherences are already loaded, so the mixture sum is positive
  // definite wherever any PSD is nonzero; loading it again would halve the
  // response in directions the data does not span.
  return TvfMcwfFactorized(*psd, coherence, u, 0.0, ctx_spec);
}

}  // namespace

MultichannelSpectrogram Beamform(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                 const TfTensor* psd, const RefSelector& u,
                                 const BeamformOptions& options) {
  RequireMasksMatch(ctx_spec, masks, "masks");
  BEAMKIT_REQUIRE(u.dim == ctx_spec.dim(), ErrorCode::kShape, "reference selector size");
  if (psd != nullptr) {
    RequireMasksMatch(ctx_spec, *psd, "power spectra");
    BEAMKIT_REQUIRE(psd->sources() == masks.sources(), ErrorCode::kShape,
                    "power spectra and masks differ in source count");
  }
  if (options.block_frames && *options.block_frames < ctx_spec.frames()) {
    return BlockBeamform(ctx_spec, masks, psd, u, options);
  }
  return BeamformFull(ctx_spec, masks, psd, u, options);
}

MultichannelSpectrogram BlockBeamform(const ContextSpectrogram& ctx_spec, const MaskTensor& masks,
                                      const TfTensor* psd, const RefSelector& u,
                                      const BeamformOptions& options) {
  BEAMKIT_REQUIRE(options.block_frames.has_value(), ErrorCode::kInvalidConfig,
                  "block processing needs a block length");
  const std::size_t block = *options.block_frames;
  BEAMKIT_REQUIRE(block >= 2 && block % 2 == 0, ErrorCode::kInvalidConfig,
                  "block length must be even and >= 2 frames");
  RequireMasksMatch(ctx_spec, masks, "masks");
  const std::size_t frames = ctx_spec.frames();
  if (block >= frames) {
    BeamformOptions whole = options;
    whole.block_frames.reset();
    return BeamformFull(ctx_spec, masks, psd, u, whole);
  }
  if (options.mode == BeamformMode::kTimeVaryingFactorized) {
    BEAMKIT_REQUIRE(psd != nullptr, ErrorCode::kInvalidInput,
                    "time-varying beamforming needs source power spectra");
  }

  const std::size_t sources = masks.sources();
  const std::size_t half = block / 2;
  const std::vector<double> window = MakeWindow(WindowKind::kVorbis, block);
  MultichannelSpectrogram out(sources, frames, ctx_spec.config(), ctx_spec.num_samples());
  const auto& kt = kernels::Active();

  // Block b covers frames [b*half - half, b*half + half); every frame lies in
  // exactly two blocks at window positions p and p + half.
  for (std::ptrdiff_t start = -static_cast<std::ptrdiff_t>(half);
       start < static_cast<std::ptrdiff_t>(frames); start += static_cast<std::ptrdiff_t>(half)) {
    const std::size_t begin = static_cast<std::size_t>(std::max<std::ptrdiff_t>(start, 0));
    const std::size_t end = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(start + static_cast<std::ptrdiff_t>(block),
                                 static_cast<std::ptrdiff_t>(frames)));
    std::vector<double> v(end - begin);
    std::vector<double> v2(end - begin);
    for (std::size_t t = begin; t < end; ++t) {
      v[t - begin] = window[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(t) - start)];
      v2[t - begin] = v[t - begin] * v[t - begin];
    }
    const FrameWeighting weighting{begin, end, v};

    if (options.mode == BeamformMode::kTimeInvariant) {
      const Covariances covs = AccumulateCovariances(ctx_spec, masks, weighting, true);
      for (std::size_t s = 0; s < sources; ++s) {
        const WeightField w = TiMcwfWeights(covs.mixture, covs.sources[s], u, options.loading);
        ParallelForBins(ctx_spec.bins(), [&](std::size_t f) {
          const Complex* wf = w.weights(f).data();
          for (std::size_t t = begin; t < end; ++t) {
            out.at(s, t, f) += v2[t - begin] * kt.dot_conj(wf, ctx_spec.vec(t, f).data(),
                                                           ctx_spec.dim());
          }
        });
      }
    } else {
      const Covariances covs = AccumulateCovariances(ctx_spec, masks, weighting, false);
      const auto coherence =
          LoadedCoherence(covs.sources, options.normalization, options.loading);
      const std::size_t dim = ctx_spec.dim();
      auto source_matrix = [&](std::size_t s, std::size_t t, std::size_t f,
                               std::span<Complex> dst) {
        const double p = psd->at(s, t, f);
        auto c = coherence[s].matrix(f);
        for (std::size_t i = 0; i < dim * dim; ++i) dst[i] = p * c[i];
      };
      TvfRange(sources, source_matrix, u, 0.0, ctx_spec, begin, end, v2, out);
    }
  }
  return out;
}

}  // namespace beamkit
