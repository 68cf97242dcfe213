// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails. Tolerances and time budgets are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "beamkit/beamform.hpp"
#include "beamkit/dataset.hpp"
#include "beamkit/mask.hpp"
#include "beamkit/metrics.hpp"
#include "beamkit/pipeline.hpp"
#include "beamkit/roomsim.hpp"
#include "beamkit/stft.hpp"
#include "beamkit/sweep.hpp"

namespace beamkit {
namespace {

using testing::LeastSquaresWeights;
using testing::MaxAbs;
using testing::MaxAbsDiff;
using testing::Norm;
using testing::RandomContext;
using testing::RandomWave;
using testing::RelativeError;
using testing::Subtract;

constexpr double kStftTol = 1e-6;            // times max |x|
constexpr double kLsTol = 1e-6;              // relative weight error
constexpr double kPassTol = 1e-4;            // relative waveform error
constexpr double kPartitionTol = 1e-10;      // times max(1, max |Phi_y|)
constexpr double kCapTol = 1e-6;             // dB
constexpr double kLossTol = 1e-9;            // absolute loss difference
constexpr double kScaleTol = 1e-9;           // dB
constexpr double kArrivalTol = 1.0;          // samples
constexpr double kConsistencyUlps = 8.0;     // times eps * max |y|

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

MaskTensor PartitionMasks(std::mt19937_64& rng, std::size_t sources, std::size_t frames,
                          std::size_t bins) {
  StftConfig c;
  c.win_len = 2 * (bins - 1);
  c.hop = c.win_len / 2;
  c.fft_size = c.win_len;
  std::normal_distribution<double> g(0.0, 1.0);
  MultichannelSpectrogram est(sources, frames, c, 1);
  for (auto& v : est.data()) v = Complex(g(rng), g(rng));
  return WienerLikeMask(est, 0.0);
}

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// 1. STFT analysis/synthesis round trip.
Outcome StftRoundTrip() {
  std::mt19937_64 rng(101);
  const StftConfig configs[] = {StftConfig::Masking(),
                                StftConfig::Beamforming(64.0, 16000, WindowKind::kVorbis)};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1000 + rng() % 47000;
    const auto x = RandomWave(rng, 1 + i % 2, n);
    const auto y = Istft(Stft(x, configs[i % 2]));
    worst = std::max(worst, MaxAbsDiff(y.samples(), x.samples()) / MaxAbs(x.samples()));
  }
  return {worst <= kStftTol, Format("worst error %.2e x max|x| (tol %.0e)", worst, kStftTol)};
}

// 2. TI-MCWF weights against an independent regularized least-squares solve.
Outcome LeastSquaresOracle() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  int fallbacks = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t M = std::vector<std::size_t>{1, 2, 4}[i % 3];
    const std::size_t c = std::vector<std::size_t>{1, 2, 4}[(i / 3) % 3];
    const std::size_t T = 8 + rng() % 57;
    const auto ctx = RandomContext(rng, M, T, ContextConfig::FromTotal(c));
    const std::size_t S = 1 + rng() % 3;
    const auto masks = PartitionMasks(rng, S, T, ctx.bins());
    const RefSelector u(M, ctx.context(), rng() % M);
    const auto covs = EstimateCovariances(ctx, masks);
    for (std::size_t s = 0; s < S; ++s) {
      const auto w = TiMcwfWeights(covs.mixture, covs.sources[s], u, kDefaultLoading);
      fallbacks += static_cast<int>(w.fallbacks().size());
      for (std::size_t f = 0; f < ctx.bins(); ++f) {
        const auto oracle = LeastSquaresWeights(ctx, masks.plane(s), f, u.position(), kDefaultLoading);
        worst = std::max(worst, Norm(Subtract(w.weights(f), oracle)) / Norm(oracle));
      }
    }
  }
  return {worst <= kLsTol && fallbacks == 0,
          Format("worst relative error %.2e (tol %.0e), %.0f solver fallbacks", worst, kLsTol,
                 fallbacks)};
}

// 3. Single source, unit mask, tiny loading.
Outcome PassThrough() {
  std::mt19937_64 rng(303);
  const auto x = RandomWave(rng, 4, 3 * 16000);
  const auto cfg = StftConfig::Beamforming(64.0);
  const ContextConfig cc = ContextConfig::FromTotal(4);
  const auto spec = Stft(x, cfg);
  const auto ctx = ExpandContext(spec, cc);
  MaskTensor ones(1, ctx.frames(), ctx.bins());
  std::fill(ones.data().begin(), ones.data().end(), 1.0);
  const std::size_t ref = 1;
  const TfTensor psd = PowerSpectra(spec.SelectChannels(std::vector<std::size_t>{ref}));
  const RefSelector u(4, cc, ref);
  struct Case {
    const char* name;
    BeamformMode mode;
    std::optional<std::size_t> block;
  };
  const Case cases[] = {{"TI", BeamformMode::kTimeInvariant, std::nullopt},
                        {"TVF", BeamformMode::kTimeVaryingFactorized, std::nullopt},
                        {"BlockTI", BeamformMode::kTimeInvariant, 40},
                        {"BlockTVF", BeamformMode::kTimeVaryingFactorized, 40}};
  Outcome out;
  for (const Case& c : cases) {
    BeamformOptions options;
    options.mode = c.mode;
    options.loading = 1e-8;
    options.block_frames = c.block;
    const double err = RelativeError(Istft(Beamform(ctx, ones, &psd, u, options)).channel(0),
                                     x.channel(ref));
    out.pass = out.pass && err <= kPassTol;
    out.detail += std::string(out.detail.empty() ? "" : ", ") + c.name + Format(" %.1e", err);
  }
  out.detail += Format(" (tol %.0e)", kPassTol);
  return out;
}

// 4. Source covariances sum to the mixture covariance under Wiener-like masks.
Outcome CovariancePartition() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t S = 1 + i % 4;
    const std::size_t T = 6 + rng() % 40;
    const auto ctx = RandomContext(rng, 1 + rng() % 4, T, ContextConfig::FromTotal(1 + rng() % 4));
    const auto masks = PartitionMasks(rng, S, T, ctx.bins());
    const auto covs = EstimateCovariances(ctx, masks);
    for (std::size_t f = 0; f < ctx.bins(); ++f) {
      const auto mix = covs.mixture.matrix(f);
      double scale = 1.0;
      for (const auto& v : mix) scale = std::max(scale, std::abs(v));
      for (std::size_t k = 0; k < mix.size(); ++k) {
        Complex sum = 0.0;
        for (std::size_t s = 0; s < S; ++s) sum += covs.sources[s].matrix(f)[k];
        worst = std::max(worst, std::abs(sum - mix[k]) / scale);
      }
    }
  }
  return {worst <= kPartitionTol, Format("worst deviation %.2e (tol %.0e)", worst, kPartitionTol)};
}

// 5. Loss and metric suite.
Outcome LossSuite() {
  std::mt19937_64 rng(505);
  const LossConfig cfg;
  Outcome out;
  double cap_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto x = RandomWave(rng, 1, 16000);
    cap_err = std::max(cap_err, std::abs(SnrStabilized(x.channel(0), x.channel(0), cfg) -
                                         10.0 * std::log10(1.0 / cfg.tau)));
  }
  double loss_err = 0.0;
  int perm_mismatch = 0;
  for (int i = 0; i < 50; ++i) {
    const auto refs = RandomWave(rng, 3, 400);
    auto est = RandomWave(rng, 3, 400);
    const double mix = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t k = 0; k < est.samples().size(); ++k) {
      est.samples()[k] = mix * est.samples()[k] + refs.samples()[(k + 400 * (i % 3)) % 1200];
    }
    const LossResult r = SequenceLoss(est, refs, cfg);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_perm;
    std::vector<std::size_t> perm{0, 1, 2};
    do {
      double loss = 0.0;
      for (std::size_t s = 0; s < 3; ++s) {
        // Written out directly rather than through SnrStabilized.
        double num = 0.0, den = 0.0;
        for (std::size_t n = 0; n < 400; ++n) {
          const double x = refs.at(s, n);
          const double d = x - est.at(perm[s], n);
          num += x * x;
          den += d * d;
        }
        loss -= 10.0 * std::log10(num / (den + cfg.tau * num + cfg.epsilon));
      }
      if (loss < best) {
        best = loss;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    loss_err = std::max(loss_err, std::abs(best - r.loss));
    perm_mismatch += r.permutation != best_perm;
  }
  double scale_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto x = RandomWave(rng, 2, 3000);
    const double base = SiSnr(x.channel(1), x.channel(0));
    for (double a : {1e-3, 0.5, 7.0, 1e3}) {
      std::vector<double> scaled(x.channel(1).begin(), x.channel(1).end());
      for (double& v : scaled) v *= a;
      scale_err = std::max(scale_err, std::abs(SiSnr(scaled, x.channel(0)) - base));
    }
  }
  out.pass = cap_err <= kCapTol && loss_err <= kLossTol && perm_mismatch == 0 &&
             scale_err <= kScaleTol;
  out.detail = Format("cap error %.1e dB, brute-force loss error %.1e, scale error %.1e dB", cap_err,
                      loss_err, scale_err) +
               Format(", %.0f permutation mismatches", perm_mismatch);
  return out;
}

// Peak position of the tap closest to the expected arrival.
double PeakNear(const Rir& rir, double expected) {
  const auto centre = static_cast<std::ptrdiff_t>(std::lround(expected));
  std::ptrdiff_t best = centre;
  for (std::ptrdiff_t k = centre - 4; k <= centre + 4; ++k) {
    if (k >= 0 && k < static_cast<std::ptrdiff_t>(rir.taps.size()) &&
        std::abs(rir.taps[k]) > std::abs(rir.taps[best])) {
      best = k;
    }
  }
  return static_cast<double>(best);
}

// 6. Room simulator geometry and determinism.
Outcome RoomSimulator() {
  std::mt19937_64 rng(606);
  const double samples_per_metre = 16000.0 / kSpeedOfSound;
  double worst_direct = 0.0;
  for (int i = 0; i < 100; ++i) {
    const RoomScene scene = SampleScene(rng, 1 + rng() % 3, 8);
    const std::size_t s = rng() % scene.sources.size();
    const std::size_t m = rng() % scene.mics.size();
    const Rir rir = ImageMethodRir(scene, s, m);
    const double geo = Distance(scene.sources[s], scene.mics[m]) * samples_per_metre;
    worst_direct = std::max(worst_direct, std::abs(static_cast<double>(FirstArrival(rir)) - geo));
  }

  // Toy room, one reflecting wall at a time, first-order images only.
  RoomScene toy;
  toy.width = 6.0;
  toy.length = 5.0;
  toy.height = 3.0;
  toy.sources = {{1.2, 1.9, 0.8}};
  toy.mics = {{4.1, 3.3, 1.7}};
  toy.mic_vertices = {0};
  toy.array_center = toy.mics[0];
  const Vec3& src = toy.sources[0];
  const Vec3& mic = toy.mics[0];
  const Vec3 images[kNumSurfaces] = {{-src.x, src.y, src.z},
                                     {2 * toy.width - src.x, src.y, src.z},
                                     {src.x, -src.y, src.z},
                                     {src.x, 2 * toy.length - src.y, src.z},
                                     {src.x, src.y, -src.z},
                                     {src.x, src.y, 2 * toy.height - src.z}};
  RirOptions first_order;
  first_order.max_order = 1;
  first_order.perturb = 0.0;
  double worst_echo = 0.0;
  for (std::size_t wall = 0; wall < kNumSurfaces; ++wall) {
    for (auto& row : toy.reflectivity) row = {0.0, 0.0, 0.0};
    toy.reflectivity[wall] = {0.9, 0.9, 0.9};
    const Rir rir = ImageMethodRir(toy, 0, 0, first_order);
    const double expected = static_cast<double>(rir.lead) + Distance(images[wall], mic) * samples_per_metre;
    worst_echo = std::max(worst_echo, std::abs(PeakNear(rir, expected) - expected));
  }

  std::mt19937_64 a(77), b(77);
  const RoomScene sa = SampleScene(a, 2, 8);
  const RoomScene sb = SampleScene(b, 2, 8);
  bool deterministic = ImageMethodRir(sa, 1, 5).taps == ImageMethodRir(sb, 1, 5).taps;
  DatasetOptions opt;
  opt.duration_s = 1.0;
  opt.seed = 9;
  deterministic = deterministic && SimulateExample(opt, 3).mixture == SimulateExample(opt, 3).mixture;

  return {worst_direct <= kArrivalTol && worst_echo <= kArrivalTol && deterministic,
          Format("direct-path worst %.2f samples, first-order echo worst %.2f samples, ",
                 worst_direct, worst_echo) +
              (deterministic ? "deterministic" : "NOT deterministic")};
}

// Largest |sum_s estimate - mixture reference| over masking stages, in units
// of eps * max |y|.
double ConsistencyUlps(const SeparationTrace& trace, std::span<const double> mix_ref) {
  const double unit = std::numeric_limits<double>::epsilon() * std::max(MaxAbs(mix_ref), 1e-300);
  double worst = 0.0;
  for (const auto& stage : trace.stages) {
    if (stage.name.rfind("MN", 0) != 0) continue;
    for (std::size_t n = 0; n < mix_ref.size(); ++n) {
      double sum = 0.0;
      for (std::size_t s = 0; s < stage.estimates.channels(); ++s) sum += stage.estimates.at(s, n);
      worst = std::max(worst, std::abs(sum - mix_ref[n]) / unit);
    }
  }
  return worst;
}

double g_trend_consistency = 0.0;

// 7. Trends with oracle masks on a fixed-seed desk set.
Outcome Trends() {
  DatasetOptions opt;
  opt.task = Task::kSep2;
  opt.num_examples = 20;
  opt.seed = 20240;
  opt.mic_subset = 8;
  opt.duration_s = 10.0;
  std::vector<Example> examples(opt.num_examples);
  for (std::size_t i = 0; i < examples.size(); ++i) examples[i] = SimulateExample(opt, i);

  const SweepGrid grid;
  const SweepCell cells[] = {{BfMode::kTi, 64.0, 4, std::nullopt, 8},
                             {BfMode::kTi, 128.0, 1, std::nullopt, 8},
                             {BfMode::kTi, 64.0, 4, std::nullopt, 4},
                             {BfMode::kTi, 64.0, 4, std::nullopt, 2}};
  double bf1[4] = {}, bf2[4] = {};
  for (const Example& ex : examples) {
    for (std::size_t c = 0; c < 4; ++c) {
      const auto channels = SubsetChannels(ex.scene.mic_vertices, cells[c].mics);
      const MultichannelWaveform mixture = ex.mixture.SelectChannels(channels);
      std::vector<MultichannelWaveform> truth;
      std::vector<std::vector<double>> refs;
      for (const auto& img : ex.images) {
        truth.push_back(img.SelectChannels(channels));
        refs.emplace_back(truth.back().channel(0).begin(), truth.back().channel(0).end());
      }
      const auto references = MultichannelWaveform::FromChannels(refs, mixture.sample_rate());
      const SeparationTrace trace =
          RunSequence(mixture, truth, CellPipeline(grid, cells[c], mixture.sample_rate()));
      g_trend_consistency = std::max(g_trend_consistency, ConsistencyUlps(trace, mixture.channel(0)));
      bf1[c] += Evaluate(trace.Get("BF1").estimates, references, mixture.channel(0)).mean_si_snri();
      bf2[c] += Evaluate(trace.Get("BF2").estimates, references, mixture.channel(0)).mean_si_snri();
    }
  }
  for (std::size_t c = 0; c < 4; ++c) {
    bf1[c] /= static_cast<double>(examples.size());
    bf2[c] /= static_cast<double>(examples.size());
  }
  const bool a = bf2[0] > bf2[1];
  const bool b = bf2[0] > bf1[0];
  const bool c = bf2[3] <= bf2[2] && bf2[2] <= bf2[0];
  Outcome out;
  out.pass = a && b && c;
  out.detail = std::string("(a) ") + (a ? "ok" : "violated") +
               Format(": TI 64ms x 4 %.2f dB vs TI 128ms x 1 %.2f dB; ", bf2[0], bf2[1]) +
               "(b) " + (b ? "ok" : "violated") + Format(": BF2 %.2f dB vs BF1 %.2f dB; ", bf2[0], bf1[0]) +
               "(c) " + (c ? "ok" : "violated") +
               Format(": 2/4/8 mics %.2f / %.2f / %.2f dB", bf2[3], bf2[2], bf2[0]);
  return out;
}

// 8. Mixture consistency after every projection, across tasks and modes.
Outcome MixtureConsistency() {
  double worst = g_trend_consistency;
  int runs = 0;
  for (Task task : {Task::kEnh2Noise3, Task::kSep2, Task::kSep3}) {
    DatasetOptions opt;
    opt.task = task;
    opt.seed = 808;
    opt.duration_s = 1.5;
    opt.mic_subset = 4;
    opt.rir.max_order = 6;
    const Example ex = SimulateExample(opt, 0);
    for (BfMode mode : {BfMode::kTi, BfMode::kTvf, BfMode::kBlockTi, BfMode::kBlockTvf}) {
      PipelineConfig config = PipelineConfig::Default();
      for (std::size_t i = 0; i + 1 < config.stages.size(); ++i) {
        config.stages[i].bf_mode = mode;
        if (mode == BfMode::kBlockTi || mode == BfMode::kBlockTvf) {
          config.stages[i].block_frames = BlockFramesFromSeconds(0.5, config.stages[i].bf_stft);
        }
      }
      worst = std::max(worst, ConsistencyUlps(RunSequence(ex.mixture, ex.images, config),
                                              ex.mixture.channel(0)));
      ++runs;
    }
  }
  return {worst <= kConsistencyUlps,
          Format("worst |sum - y| = %.1f eps x max|y| over %.0f extra runs and the trend runs (tol %.0f)",
                 worst, runs, kConsistencyUlps)};
}

}  // namespace
}  // namespace beamkit

int main() {
  using namespace beamkit;
  const std::vector<Criterion> criteria = {
      {1, "stft round trip", 10.0, StftRoundTrip},
      {2, "mcwf least-squares oracle", 30.0, LeastSquaresOracle},
      {3, "single-source pass-through", 10.0, PassThrough},
      {4, "covariance partition", 5.0, CovariancePartition},
      {5, "loss and metric suite", 10.0, LossSuite},
      {6, "room simulator", 60.0, RoomSimulator},
      {7, "oracle-mask trends", 600.0, Trends},
      {8, "mixture consistency", 5.0, MixtureConsistency},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = seconds <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s budget%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), seconds, c.budget_s, in_time ? "" : " EXCEEDED");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
