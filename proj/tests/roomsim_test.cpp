// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/roomsim.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "beamkit/error.hpp"
#include "test_util.hpp"

namespace beamkit {
namespace {

using testing::RandomWave;

RoomScene ToyRoom() {
  RoomScene scene;
  scene.width = 6.0;
  scene.length = 5.0;
  scene.height = 3.0;
  for (auto& row : scene.reflectivity) row = {0.0, 0.0, 0.0};
  scene.mics = {{4.0, 2.5, 1.5}, {4.2, 2.5, 1.5}};
  scene.mic_vertices = {0, 1};
  scene.array_center = {4.1, 2.5, 1.5};
  scene.sources = {{1.5, 2.5, 1.5}, {2.0, 1.0, 2.0}};
  scene.seed = 99;
  return scene;
}

double DelaySamples(double distance) { return distance / kSpeedOfSound * 16000.0; }

TEST(SampleScene, RespectsRangesMarginsAndCubeGeometry) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const RoomScene s = SampleScene(rng, 3, 8);
    EXPECT_GE(s.width, 3.0);
    EXPECT_LE(s.width, 7.0);
    EXPECT_GE(s.length, 4.0);
    EXPECT_LE(s.length, 8.0);
    EXPECT_GE(s.height, 2.13);
    EXPECT_LE(s.height, 3.05);
    EXPECT_NO_THROW(s.Validate());
    ASSERT_EQ(s.mics.size(), 8u);
    for (std::size_t a = 0; a < 8; ++a) {
      for (std::size_t b = a + 1; b < 8; ++b) {
        const int bits = __builtin_popcount(static_cast<unsigned>(a ^ b));
        if (bits == 1) {
          EXPECT_NEAR(Distance(s.mics[a], s.mics[b]), 0.20, 1e-12);
        }
      }
    }
    for (const auto& r : s.reflectivity) {
      for (double v : r) {
        EXPECT_GE(v, 0.6);
        EXPECT_LE(v, 0.95);
      }
    }
  }
}

TEST(SampleScene, IsDeterministicAndSubsetsAreNested) {
  std::mt19937_64 a(7), b(7);
  const RoomScene s1 = SampleScene(a, 2, 4);
  const RoomScene s2 = SampleScene(b, 2, 4);
  EXPECT_EQ(s1.mics, s2.mics);
  EXPECT_EQ(s1.sources, s2.sources);
  EXPECT_EQ(s1.seed, s2.seed);
  EXPECT_EQ(MicSubsetVertices(1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(MicSubsetVertices(2), (std::vector<std::size_t>{0, 7}));
  EXPECT_EQ(MicSubsetVertices(4), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(MicSubsetVertices(8).size(), 8u);
  EXPECT_THROW(MicSubsetVertices(3), Error);
  const Vec3 c{1, 1, 1};
  EXPECT_NEAR(Distance(CubeVertex(c, 0), CubeVertex(c, 7)), 0.2 * std::sqrt(3.0), 1e-12);
}

TEST(Rir, FreeFieldIsSingleDelayedImpulse) {
  RoomScene scene = ToyRoom();
  RirOptions opt;
  opt.max_order = 0;
  opt.perturb = 0.0;
  const Rir rir = ImageMethodRir(scene, 0, 0, opt);
  const double d = Distance(scene.sources[0], scene.mics[0]);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < rir.taps.size(); ++k) {
    if (std::abs(rir.taps[k]) > std::abs(rir.taps[peak])) peak = k;
  }
  EXPECT_EQ(static_cast<long>(peak) - static_cast<long>(rir.lead), std::lround(DelaySamples(d)));
  EXPECT_NEAR(std::abs(FirstArrival(rir) - DelaySamples(d)), 0.0, 1.0);
  // Peak height is the 1/(4 pi d) amplitude times the sinc value at the
  // fractional offset.
  const double frac = DelaySamples(d) - std::round(DelaySamples(d));
  const double sinc = frac == 0.0 ? 1.0 : std::sin(std::numbers::pi * frac) / (std::numbers::pi * frac);
  EXPECT_NEAR(rir.taps[peak], sinc / (4.0 * std::numbers::pi * d), 2e-3 / d);
}

TEST(Rir, AbsorbingWallsEqualFreeField) {
  RoomScene scene = ToyRoom();
  RirOptions zero;
  zero.max_order = 0;
  RirOptions many;
  many.max_order = 4;
  const Rir a = ImageMethodRir(scene, 1, 0, zero);
  const Rir b = ImageMethodRir(scene, 1, 0, many);
  EXPECT_EQ(a.taps, b.taps);
  EXPECT_EQ(DefaultMaxOrder(scene, 0, 0), 0);
}

TEST(Rir, CorridorEchoesMatchHandEnumeratedImages) {
  RoomScene scene = ToyRoom();
  scene.reflectivity[0] = {1.0, 1.0, 1.0};  // x = 0
  scene.reflectivity[1] = {1.0, 1.0, 1.0};  // x = W
  RirOptions opt;
  opt.max_order = 1;
  opt.perturb = 0.0;
  const Rir rir = ImageMethodRir(scene, 0, 0, opt);
  // Source x = 1.5, mic x = 4.0, W = 6: direct 2.5 m, mirror in x = 0 at
  // -1.5 (5.5 m), mirror in x = W at 10.5 (6.5 m).
  for (double r : {2.5, 5.5, 6.5}) {
    const double pos = static_cast<double>(rir.lead) + DelaySamples(r);
    const auto centre = static_cast<std::size_t>(std::lround(pos));
    std::size_t best = centre - 4;
    for (std::size_t k = centre - 4; k <= centre + 4; ++k) {
      if (std::abs(rir.taps[k]) > std::abs(rir.taps[best])) best = k;
    }
    EXPECT_LE(std::abs(static_cast<double>(best) - pos), 1.0) << "r=" << r;
    EXPECT_GT(rir.taps[best], 0.6 / (4.0 * std::numbers::pi * r)) << "r=" << r;
  }
}

TEST(Rir, DirectPathAndInterMicDelaysMatchGeometry) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 6; ++i) {
    const RoomScene scene = SampleScene(rng, 2, 8);
    for (std::size_t s = 0; s < 2; ++s) {
      std::vector<double> measured, expected;
      for (std::size_t m = 0; m < 8; m += 3) {
        const Rir rir = ImageMethodRir(scene, s, m);
        const double geo = DelaySamples(Distance(scene.sources[s], scene.mics[m]));
        EXPECT_LE(std::abs(static_cast<double>(FirstArrival(rir)) - geo), 1.0);
        measured.push_back(static_cast<double>(FirstArrival(rir)));
        expected.push_back(geo);
      }
      for (std::size_t k = 1; k < measured.size(); ++k) {
        EXPECT_LE(std::abs((measured[k] - measured[0]) - (expected[k] - expected[0])), 2.0);
      }
    }
  }
}

TEST(Rir, ReflectionsNeverPrecedeTheDirectPath) {
  // Source just above the floor: the floor image is only centimetres
  // farther than the source, well inside the jitter range.
  RoomScene scene = ToyRoom();
  for (auto& row : scene.reflectivity) row = {0.9, 0.8, 0.7};
  scene.sources = {{1.0, 2.5, 0.12}};
  scene.mics = {{5.0, 2.5, 0.15}};
  scene.mic_vertices = {0};
  RirOptions opt;
  opt.max_order = 3;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    scene.seed = seed;
    const Rir rir = ImageMethodRir(scene, 0, 0, opt);
    const double r = Distance(scene.sources[0], scene.mics[0]);
    const double direct = 1.0 / (4.0 * std::numbers::pi * r);
    const auto cutoff = static_cast<std::size_t>(static_cast<double>(rir.lead) + DelaySamples(r) - 3.0);
    for (std::size_t k = 0; k < cutoff; ++k) ASSERT_LE(std::abs(rir.taps[k]), 0.3 * direct) << seed;
    EXPECT_LE(std::abs(static_cast<double>(FirstArrival(rir)) - DelaySamples(r)), 1.0) << seed;
  }
}

TEST(Rir, EnergyIsFiniteAndTailDecays) {
  std::mt19937_64 rng(4);
  const RoomScene scene = SampleScene(rng, 1, 1);
  const Rir rir = ImageMethodRir(scene, 0, 0);
  double total = 0.0;
  for (double v : rir.taps) {
    ASSERT_TRUE(std::isfinite(v));
    total += v * v;
  }
  EXPECT_GT(total, 0.0);
  // Energy of the last quarter is a small fraction of the first quarter.
  const std::size_t q = rir.taps.size() / 4;
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < q; ++k) head += rir.taps[k] * rir.taps[k];
  for (std::size_t k = rir.taps.size() - q; k < rir.taps.size(); ++k) tail += rir.taps[k] * rir.taps[k];
  EXPECT_LT(tail, 0.1 * head);
  EXPECT_GE(rir.max_order, 1);
  EXPECT_LE(rir.max_order, 20);
}

TEST(Rir, DeterministicForFixedSeedAndSeedDependent) {
  std::mt19937_64 rng(5);
  RoomScene scene = SampleScene(rng, 2, 2);
  RirOptions opt;
  opt.max_order = 6;
  const Rir a = ImageMethodRir(scene, 1, 1, opt);
  const Rir b = ImageMethodRir(scene, 1, 1, opt);
  EXPECT_EQ(a.taps, b.taps);
  scene.seed ^= 1;
  const Rir c = ImageMethodRir(scene, 1, 1, opt);
  EXPECT_NE(a.taps, c.taps);
}

TEST(Rir, RejectsCoincidentSourceAndMic) {
  RoomScene scene = ToyRoom();
  scene.sources[0] = scene.mics[0];
  EXPECT_THROW(ImageMethodRir(scene, 0, 0), Error);
  EXPECT_THROW(ImageMethodRir(ToyRoom(), 5, 0), Error);
  RirOptions bad;
  bad.max_order = -1;
  EXPECT_THROW(ImageMethodRir(ToyRoom(), 0, 0, bad), Error);
}

TEST(Convolve, MatchesDirectSumWithLead) {
  std::mt19937_64 rng(6);
  const auto x = RandomWave(rng, 1, 300);
  const auto h = RandomWave(rng, 1, 57);
  const std::size_t lead = 9;
  const auto y = ConvolveTruncated(x.channel(0), h.channel(0), lead);
  ASSERT_EQ(y.size(), 300u);
  for (std::size_t n = 0; n < 300; ++n) {
    double ref = 0.0;
    for (std::size_t k = 0; k < 57; ++k) {
      const long i = static_cast<long>(n + lead) - static_cast<long>(k);
      if (i >= 0 && i < 300) ref += h.at(0, k) * x.at(0, static_cast<std::size_t>(i));
    }
    EXPECT_NEAR(y[n], ref, 1e-10);
  }
}

TEST(RenderMixture, SingleSourceAndAdditivity) {
  std::mt19937_64 rng(7);
  const RoomScene scene = SampleScene(rng, 2, 2);
  const auto dry = RandomWave(rng, 2, 4000);
  RirOptions opt;
  opt.max_order = 3;
  const auto one = RenderMixture(scene, dry.SelectChannels(std::vector<std::size_t>{0}), {0.0},
                                 nullptr, opt);
  EXPECT_EQ(one.mixture, one.images[0]);

  const auto two = RenderMixture(scene, dry, {0.0, 0.0}, nullptr, opt);
  auto power = [](std::span<const double> x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
  };
  const double p0 = power(two.images[0].channel(0));
  const double p1 = power(two.images[1].channel(0));
  EXPECT_NEAR(p1 / p0, 1.0, 1e-6);
  for (std::size_t i = 0; i < two.mixture.samples().size(); ++i) {
    EXPECT_NEAR(two.mixture.samples()[i], two.images[0].samples()[i] + two.images[1].samples()[i],
                1e-15);
  }

  const auto snr = RenderMixture(scene, dry, {0.0, -6.0}, nullptr, opt);
  EXPECT_NEAR(10.0 * std::log10(power(snr.images[0].channel(0)) / power(snr.images[1].channel(0))),
              -6.0, 1e-6);
}

TEST(RenderMixture, RejectsSilentSource) {
  std::mt19937_64 rng(8);
  const RoomScene scene = SampleScene(rng, 2, 1);
  MultichannelWaveform dry = RandomWave(rng, 2, 1000);
  std::fill(dry.channel(1).begin(), dry.channel(1).end(), 0.0);
  RirOptions opt;
  opt.max_order = 1;
  EXPECT_THROW(RenderMixture(scene, dry, {0.0, 0.0}, nullptr, opt), Error);
  EXPECT_THROW(RenderMixture(scene, dry, {0.0}, nullptr, opt), Error);
}

TEST(DrawSnrs, ReferenceSourceIsZeroAndSpreadIsSeven) {
  std::mt19937_64 rng(9);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto s = DrawSnrs(rng, 2);
    EXPECT_EQ(s[0], 0.0);
    sum += s[1];
    sum2 += s[1] * s[1];
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.2);
  EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean), 7.0, 0.2);
}

}  // namespace
}  // namespace beamkit
