// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "beamkit/error.hpp"

namespace beamkit {

namespace {

void RequireSameSources(const MultichannelWaveform& a, const MultichannelWaveform& b) {
  BEAMKIT_REQUIRE(a.channels() == b.channels(), ErrorCode::kShape,
                  "estimate and reference source counts differ");
  BEAMKIT_REQUIRE(a.length() == b.length(), ErrorCode::kShape,
                  "estimates and references differ in length");
  BEAMKIT_REQUIRE(a.channels() >= 1 && a.channels() <= 6, ErrorCode::kInvalidInput,
                  "permutation search supports 1 to 6 sources");
}

// Calls fn(perm) for every permutation (or only the identity).
template <typename Fn>
void ForEachPermutation(std::size_t n, bool all, Fn&& fn) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    fn(perm);
  } while (all && std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

void LossConfig::Validate() const {
  BEAMKIT_REQUIRE(tau >= 0.0, ErrorCode::kInvalidConfig, "tau must be >= 0");
  BEAMKIT_REQUIRE(epsilon > 0.0, ErrorCode::kInvalidConfig, "epsilon must be > 0");
}

double SnrStabilized(std::span<const double> estimate, std::span<const double> reference,
                     const LossConfig& cfg) {
  cfg.Validate();
  BEAMKIT_REQUIRE(estimate.size() == reference.size(), ErrorCode::kShape,
                  "estimate and reference differ in length");
  double ref_energy = 0.0;
  double err_energy = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double d = reference[n] - estimate[n];
    ref_energy += reference[n] * reference[n];
    err_energy += d * d;
  }
  return 10.0 * std::log10(ref_energy / (err_energy + cfg.tau * ref_energy + cfg.epsilon));
}

LossResult SequenceLoss(const MultichannelWaveform& estimates,
                        const MultichannelWaveform& references, const LossConfig& cfg) {
  RequireSameSources(estimates, references);
  const std::size_t sources = references.channels();
  // Pairwise SNR table, then search permutations over it.
  std::vector<double> snr(sources * sources);
  for (std::size_t r = 0; r < sources; ++r) {
    for (std::size_t e = 0; e < sources; ++e) {
      snr[r * sources + e] = SnrStabilized(estimates.channel(e), references.channel(r), cfg);
    }
  }
  LossResult best{std::numeric_limits<double>::infinity(), {}};
  ForEachPermutation(sources, cfg.permutation_invariant, [&](const auto& perm) {
    double loss = 0.0;
    for (std::size_t r = 0; r < sources; ++r) loss -= snr[r * sources + perm[r]];
    if (loss < best.loss) best = {loss, perm};
  });
  return best;
}

double SiSnr(std::span<const double> estimate, std::span<const double> reference) {
  BEAMKIT_REQUIRE(estimate.size() == reference.size(), ErrorCode::kShape,
                  "estimate and reference differ in length");
  BEAMKIT_REQUIRE(!reference.empty(), ErrorCode::kInvalidInput, "empty reference");
  const double n = static_cast<double>(reference.size());
  const double mean_est = std::accumulate(estimate.begin(), estimate.end(), 0.0) / n;
  const double mean_ref = std::accumulate(reference.begin(), reference.end(), 0.0) / n;
  double dot = 0.0;
  double ref_energy = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference[i] - mean_ref;
    dot += (estimate[i] - mean_est) * r;
    ref_energy += r * r;
  }
  BEAMKIT_REQUIRE(ref_energy > 0.0, ErrorCode::kInvalidInput,
                  "reference is zero after mean removal");
  const double alpha = dot / ref_energy;
  double target = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double t = alpha * (reference[i] - mean_ref);
    const double e = (estimate[i] - mean_est) - t;
    target += t * t;
    noise += e * e;
  }
  if (noise <= 0.0) return kSiSnrClampDb;
  if (target <= 0.0) return -kSiSnrClampDb;
  return std::clamp(10.0 * std::log10(target / noise), -kSiSnrClampDb, kSiSnrClampDb);
}

double MetricReport::mean_si_snri() const {
  if (si_snri.empty()) return 0.0;
  return std::accumulate(si_snri.begin(), si_snri.end(), 0.0) /
         static_cast<double>(si_snri.size());
}

MetricReport Evaluate(const MultichannelWaveform& estimates,
                      const MultichannelWaveform& references,
                      std::span<const double> mixture_ref, bool permutation_invariant,
                      std::optional<SampleRange> range) {
  RequireSameSources(estimates, references);
  BEAMKIT_REQUIRE(mixture_ref.size() == references.length(), ErrorCode::kShape,
                  "mixture and references differ in length");
  SampleRange r = range.value_or(SampleRange{0, references.length()});
  BEAMKIT_REQUIRE(r.begin < r.end && r.end <= references.length(), ErrorCode::kInvalidInput,
                  "invalid scoring range");
  auto cut = [&](std::span<const double> x) { return x.subspan(r.begin, r.end - r.begin); };

  const std::size_t sources = references.channels();
  std::vector<double> table(sources * sources);
  for (std::size_t ref = 0; ref < sources; ++ref) {
    for (std::size_t e = 0; e < sources; ++e) {
      table[ref * sources + e] = SiSnr(cut(estimates.channel(e)), cut(references.channel(ref)));
    }
  }
  double best_sum = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_perm;
  ForEachPermutation(sources, permutation_invariant, [&](const auto& perm) {
    double sum = 0.0;
    for (std::size_t ref = 0; ref < sources; ++ref) sum += table[ref * sources + perm[ref]];
    if (sum > best_sum) {
      best_sum = sum;
      best_perm = perm;
    }
  });

  MetricReport report;
  report.permutation = best_perm;
  for (std::size_t ref = 0; ref < sources; ++ref) {
    const double value = table[ref * sources + best_perm[ref]];
    const double baseline = SiSnr(cut(mixture_ref), cut(references.channel(ref)));
    report.si_snr.push_back(value);
    report.mixture_si_snr.push_back(baseline);
    report.si_snri.push_back(value - baseline);
  }
  return report;
}

}  // namespace beamkit
