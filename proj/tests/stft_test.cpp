// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/stft.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "beamkit/error.hpp"
#include "test_util.hpp"

namespace beamkit {
namespace {

using testing::MaxAbs;
using testing::MaxAbsDiff;
using testing::RandomWave;

StftConfig VorbisHalf(std::size_t win) {
  StftConfig c;
  c.window_kind = WindowKind::kVorbis;
  c.win_len = win;
  c.hop = win / 2;
  c.fft_size = NextPowerOfTwo(win);
  return c;
}

TEST(Window, SqrtHannSquaresSumToConstantAtQuarterHop) {
  const auto w = MakeWindow(WindowKind::kSqrtHann, 512);
  for (std::size_t k = 0; k < 128; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += w[k + 128 * j] * w[k + 128 * j];
    EXPECT_NEAR(s, 2.0, 1e-12);
  }
}

TEST(Window, VorbisIsPowerComplementaryAtHalfOverlap) {
  const auto w = MakeWindow(WindowKind::kVorbis, 1024);
  for (std::size_t k = 0; k < 512; ++k) {
    EXPECT_NEAR(w[k] * w[k] + w[k + 512] * w[k + 512], 1.0, 1e-12);
  }
}

TEST(Window, SymmetricAboutCentre) {
  for (auto kind : {WindowKind::kSqrtHann, WindowKind::kVorbis}) {
    const auto w = MakeWindow(kind, 64);
    for (std::size_t k = 0; k < 32; ++k) EXPECT_NEAR(w[k], w[63 - k], 1e-15);
  }
}

TEST(Stft, MatchesDirectDftOfEachFrame) {
  std::mt19937_64 rng(11);
  StftConfig c;
  c.win_len = 48;
  c.hop = 12;
  c.fft_size = 64;
  const auto x = RandomWave(rng, 1, 200);
  const auto spec = Stft(x, c);
  const auto w = MakeWindow(c.window_kind, c.win_len);
  const auto lead = static_cast<std::ptrdiff_t>(c.win_len - c.hop);
  ASSERT_EQ(spec.frames(), (200 + 36 + 11) / 12);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    for (std::size_t f = 0; f < spec.bins(); ++f) {
      Complex ref = 0.0;
      for (std::size_t k = 0; k < c.win_len; ++k) {
        const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t * c.hop + k) - lead;
        if (idx < 0 || idx >= 200) continue;
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(f * k) / c.fft_size;
        ref += w[k] * x.at(0, static_cast<std::size_t>(idx)) * std::polar(1.0, ang);
      }
      EXPECT_NEAR(std::abs(spec.at(0, t, f) - ref), 0.0, 1e-10);
    }
  }
}

TEST(Stft, RoundTripSqrtHannAndVorbis) {
  std::mt19937_64 rng(5);
  for (const StftConfig& c : {StftConfig::Masking(), VorbisHalf(1024), VorbisHalf(2048),
                              StftConfig::Beamforming(64.0)}) {
    for (std::size_t len : {1u, 7u, 511u, 512u, 16000u, 16001u}) {
      const auto x = RandomWave(rng, 2, len);
      const auto y = Istft(Stft(x, c));
      ASSERT_EQ(y.length(), len);
      ASSERT_EQ(y.channels(), 2u);
      EXPECT_LE(MaxAbsDiff(x.samples(), y.samples()), 1e-9 * MaxAbs(x.samples()));
    }
  }
}

TEST(Stft, IsLinear) {
  std::mt19937_64 rng(6);
  const auto c = StftConfig::Masking();
  const auto a = RandomWave(rng, 1, 3000);
  const auto b = RandomWave(rng, 1, 3000);
  MultichannelWaveform mix(1, 3000, 16000);
  for (std::size_t i = 0; i < 3000; ++i) mix.at(0, i) = 2.0 * a.at(0, i) - 0.5 * b.at(0, i);
  const auto sa = Stft(a, c), sb = Stft(b, c), sm = Stft(mix, c);
  for (std::size_t i = 0; i < sm.data().size(); ++i) {
    EXPECT_NEAR(std::abs(sm.data()[i] - (2.0 * sa.data()[i] - 0.5 * sb.data()[i])), 0.0, 1e-10);
  }
}

TEST(Stft, BeamformingConfigUsesHalfHopAndPowerOfTwoFft) {
  const auto c = StftConfig::Beamforming(64.0);
  EXPECT_EQ(c.win_len, 1024u);
  EXPECT_EQ(c.hop, 512u);
  EXPECT_EQ(c.fft_size, 1024u);
  const auto d = StftConfig::Beamforming(50.0);
  EXPECT_EQ(d.win_len, 800u);
  EXPECT_EQ(d.fft_size, 1024u);
  const auto m = StftConfig::Masking();
  EXPECT_EQ(m.win_len, 512u);
  EXPECT_EQ(m.hop, 128u);
}

TEST(Stft, RejectsBadConfigs) {
  StftConfig c;
  c.win_len = 511;
  EXPECT_THROW(c.Validate(), Error);
  c = StftConfig{};
  c.fft_size = 256;
  EXPECT_THROW(c.Validate(), Error);
  c = StftConfig{};
  c.hop = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = StftConfig{};
  c.hop = 100;
  EXPECT_THROW(c.Validate(), Error);
  EXPECT_THROW(Stft(MultichannelWaveform(), StftConfig{}), Error);
}

TEST(Stft, IstftRejectsInconsistentFrameCount) {
  MultichannelSpectrogram spec(1, 3, StftConfig::Masking(), 5000);
  EXPECT_THROW(Istft(spec), Error);
}

}  // namespace
}  // namespace beamkit
