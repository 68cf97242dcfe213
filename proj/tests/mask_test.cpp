// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/mask.hpp"

#include <gtest/gtest.h>

#include "beamkit/error.hpp"
#include "beamkit/stft.hpp"
#include "test_util.hpp"

namespace beamkit {
namespace {

using testing::MaxAbs;
using testing::MaxAbsDiff;
using testing::RandomWave;

TEST(WienerLikeMask, SumsToOneAndMatchesPowerRatio) {
  std::mt19937_64 rng(1);
  const auto est = Stft(RandomWave(rng, 3, 2000), StftConfig::Masking());
  const auto mask = WienerLikeMask(est, 0.0);
  for (std::size_t t = 0; t < mask.frames(); ++t) {
    for (std::size_t f = 0; f < mask.bins(); ++f) {
      double sum = 0.0, total = 0.0;
      for (std::size_t s = 0; s < 3; ++s) total += std::norm(est.at(s, t, f));
      for (std::size_t s = 0; s < 3; ++s) {
        const double m = mask.at(s, t, f);
        EXPECT_GE(m, 0.0);
        EXPECT_LE(m, 1.0);
        if (total > 0.0) {
          EXPECT_NEAR(m, std::norm(est.at(s, t, f)) / total, 1e-14);
        }
        sum += m;
      }
      if (total > 0.0) {
        EXPECT_NEAR(sum, 1.0, 1e-14);
      }
    }
  }
}

TEST(WienerLikeMask, SilentBinsGetZero) {
  MultichannelSpectrogram est(2, 2, StftConfig::Masking(), 1);
  est.at(0, 0, 3) = Complex(1.0, 0.0);
  const auto mask = WienerLikeMask(est);
  EXPECT_EQ(mask.at(0, 1, 3), 0.0);
  EXPECT_EQ(mask.at(1, 1, 3), 0.0);
  EXPECT_NEAR(mask.at(0, 0, 3), 1.0, 1e-9);
  EXPECT_THROW(WienerLikeMask(est, -1.0), Error);
}

TEST(OracleMasks, BinaryPicksLoudestWithLowestIndexTies) {
  MultichannelWaveform src(3, 600, 16000);
  std::mt19937_64 rng(2);
  const auto noise = RandomWave(rng, 1, 600);
  for (std::size_t i = 0; i < 600; ++i) {
    src.at(0, i) = noise.at(0, i);
    src.at(1, i) = noise.at(0, i);  // exact tie with source 0
    src.at(2, i) = 0.1 * noise.at(0, i);
  }
  const auto mask = OracleMasksFromSources(src, StftConfig::Masking(), OracleMaskKind::kBinary);
  for (std::size_t i = 0; i < mask.plane(0).size(); ++i) {
    EXPECT_EQ(mask.plane(0)[i], 1.0);
    EXPECT_EQ(mask.plane(1)[i], 0.0);
    EXPECT_EQ(mask.plane(2)[i], 0.0);
  }
}

TEST(ApplyMask, UnitPartitionReconstructsMixture) {
  std::mt19937_64 rng(3);
  const auto cfg = StftConfig::Masking();
  const auto mix = Stft(RandomWave(rng, 1, 4000), cfg);
  const auto mask = WienerLikeMask(Stft(RandomWave(rng, 2, 4000), cfg), 0.0);
  const auto est = ApplyMask(mask, mix);
  for (std::size_t i = 0; i < mix.data().size(); ++i) {
    EXPECT_NEAR(std::abs(est.channel(0)[i] + est.channel(1)[i] - mix.data()[i]), 0.0, 1e-12);
  }
  EXPECT_THROW(ApplyMask(mask, Stft(RandomWave(rng, 2, 4000), cfg)), Error);
}

TEST(MixtureConsistency, ProjectsOntoMixtureWithUniformResidual) {
  std::mt19937_64 rng(4);
  for (std::size_t s : {1u, 2u, 3u, 5u}) {
    const auto est = RandomWave(rng, s, 777);
    const auto mix = RandomWave(rng, 1, 777);
    const auto out = MixtureConsistencyProjection(est, mix.channel(0));
    for (std::size_t i = 0; i < 777; ++i) {
      double sum_in = 0.0, sum_out = 0.0;
      for (std::size_t k = 0; k < s; ++k) {
        sum_in += est.at(k, i);
        sum_out += out.at(k, i);
      }
      EXPECT_NEAR(sum_out, mix.at(0, i), 1e-13);
      const double share = (mix.at(0, i) - sum_in) / static_cast<double>(s);
      for (std::size_t k = 0; k < s; ++k) EXPECT_NEAR(out.at(k, i), est.at(k, i) + share, 1e-13);
    }
  }
}

TEST(MixtureConsistency, IsIdempotent) {
  std::mt19937_64 rng(5);
  const auto mix = RandomWave(rng, 1, 300);
  const auto once = MixtureConsistencyProjection(RandomWave(rng, 3, 300), mix.channel(0));
  const auto twice = MixtureConsistencyProjection(once, mix.channel(0));
  EXPECT_LE(MaxAbsDiff(once.samples(), twice.samples()), 1e-14);
}

TEST(OracleMaskProvider, SingleSourceReturnsMixture) {
  std::mt19937_64 rng(6);
  const auto x = RandomWave(rng, 1, 5000);
  OracleMaskProvider provider(x, {});
  const auto est = provider.Estimate(1, x.channel(0), 16000, nullptr);
  ASSERT_EQ(est.channels(), 1u);
  ASSERT_EQ(est.length(), 5000u);
  EXPECT_LE(MaxAbsDiff(est.samples(), x.samples()), 1e-8 * MaxAbs(x.samples()));
}

TEST(OracleMaskProvider, PriorEstimatesChangeOnlyPhase) {
  std::mt19937_64 rng(7);
  const auto refs = RandomWave(rng, 2, 4000);
  MultichannelWaveform mix(1, 4000, 16000);
  for (std::size_t i = 0; i < 4000; ++i) mix.at(0, i) = refs.at(0, i) + refs.at(1, i);
  const auto prior = RandomWave(rng, 2, 4000);
  const auto cfg = StftConfig::Masking();

  OracleMaskProvider with_phase(refs, {});
  OracleMaskProvider::Options plain_opts;
  plain_opts.beamformed_phase = false;
  OracleMaskProvider plain(refs, plain_opts);

  const auto a = plain.Estimate(2, mix.channel(0), 16000, &prior);
  const auto b = with_phase.Estimate(2, mix.channel(0), 16000, nullptr);
  EXPECT_EQ(a, b);  // without a prior both use the mixture phase

  const auto c = with_phase.Estimate(2, mix.channel(0), 16000, &prior);
  // Magnitudes requested from the oracle survive; the signal itself changes.
  const auto sa = Stft(a, cfg);
  const auto sc = Stft(c, cfg);
  EXPECT_GT(MaxAbsDiff(a.samples(), c.samples()), 1e-3);
  double mag_a = 0.0, mag_c = 0.0;
  for (std::size_t i = 0; i < sa.data().size(); ++i) {
    mag_a += std::abs(sa.data()[i]);
    mag_c += std::abs(sc.data()[i]);
  }
  EXPECT_GT(mag_c, 0.5 * mag_a);
}

}  // namespace
}  // namespace beamkit
