// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/roomsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamkit/error.hpp"
#include "fft_plans.hpp"

namespace beamkit {

namespace {

constexpr std::size_t kSincHalf = 40;        // 81-tap fractional delay
constexpr std::size_t kBandHalf = 127;       // 255-tap band filters
constexpr double kCrossoversHz[2] = {500.0, 2000.0};
constexpr double kReflectivityLow = 0.6;
constexpr double kReflectivityHigh = 0.95;
constexpr double kMinSourceArrayDistance = 0.5;
constexpr int kMaxOrderCap = 20;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double ToUnitSymmetric(std::uint64_t bits) {
  return 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
}

// Linear-phase lowpass, Blackman-windowed sinc normalized to unit DC gain.
std::vector<double> DesignLowpass(double cutoff_hz, int sample_rate) {
  const std::size_t len = 2 * kBandHalf + 1;
  const double fc = cutoff_hz / sample_rate;
  std::vector<double> h(len);
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = static_cast<double>(k) - static_cast<double>(kBandHalf);
    const double sinc = x == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * x) / (std::numbers::pi * x);
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len - 1);
    const double blackman = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
    h[k] = sinc * blackman;
    sum += h[k];
  }
  for (double& v : h) v /= sum;
  return h;
}

// Complementary low/mid/high filters summing to a centred unit impulse.
std::array<std::vector<double>, kNumBands> BandFilters(int sample_rate) {
  const auto low = DesignLowpass(kCrossoversHz[0], sample_rate);
  const auto low_mid = DesignLowpass(kCrossoversHz[1], sample_rate);
  std::array<std::vector<double>, kNumBands> bands;
  bands[0] = low;
  bands[1].resize(low.size());
  bands[2].resize(low.size());
  for (std::size_t k = 0; k < low.size(); ++k) {
    bands[1][k] = low_mid[k] - low[k];
    bands[2][k] = (k == kBandHalf ? 1.0 : 0.0) - low_mid[k];
  }
  return bands;
}

void AddFractionalImpulse(std::vector<double>& train, double position, double amplitude) {
  const auto centre = static_cast<std::ptrdiff_t>(std::lround(position));
  for (std::ptrdiff_t k = centre - static_cast<std::ptrdiff_t>(kSincHalf);
       k <= centre + static_cast<std::ptrdiff_t>(kSincHalf); ++k) {
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(train.size())) continue;
    const double x = static_cast<double>(k) - position;
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double window =
        0.5 * (1.0 + std::cos(std::numbers::pi * x / static_cast<double>(kSincHalf + 1)));
    train[static_cast<std::size_t>(k)] += amplitude * sinc * window;
  }
}

struct Image {
  Vec3 position;
  int order;
  std::array<double, kNumBands> gain;
};

// All images up to `max_order` with band gains and (for reflections)
// position jitter that depends only on the scene seed, the source and the
// image, so every microphone sees the same perturbed image set.
std::vector<Image> EnumerateImages(const RoomScene& scene, std::size_t source_index,
                                   int max_order, double perturb) {
  const Vec3& src = scene.sources[source_index];
  const std::array<double, 3> dims{scene.width, scene.length, scene.height};
  std::vector<Image> images;
  const int n_lim = max_order / 2 + 1;
  for (int nx = -n_lim; nx <= n_lim; ++nx)
    for (int qx = 0; qx <= 1; ++qx)
      for (int ny = -n_lim; ny <= n_lim; ++ny)
        for (int qy = 0; qy <= 1; ++qy)
          for (int nz = -n_lim; nz <= n_lim; ++nz)
            for (int qz = 0; qz <= 1; ++qz) {
              const std::array<int, 3> n{nx, ny, nz};
              const std::array<int, 3> q{qx, qy, qz};
              int order = 0;
              std::array<int, kNumSurfaces> hits{};
              for (std::size_t a = 0; a < 3; ++a) {
                hits[2 * a] = std::abs(n[a] - q[a]);
                hits[2 * a + 1] = std::abs(n[a]);
                order += hits[2 * a] + hits[2 * a + 1];
              }
              if (order > max_order) continue;
              Image img;
              img.order = order;
              for (std::size_t a = 0; a < 3; ++a) {
                img.position[a] = (1 - 2 * q[a]) * src[a] + 2.0 * n[a] * dims[a];
              }
              for (std::size_t b = 0; b < kNumBands; ++b) {
                double g = 1.0;
                for (std::size_t w = 0; w < kNumSurfaces; ++w) {
                  if (hits[w] > 0) g *= std::pow(scene.reflectivity[w][b], hits[w]);
                }
                img.gain[b] = g;
              }
              if (order > 0 && perturb > 0.0) {
                std::uint64_t key = SplitMix64(scene.seed ^ SplitMix64(source_index + 1));
                for (int v : {nx, qx, ny, qy, nz, qz}) {
                  key = SplitMix64(key ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
                }
                for (std::size_t a = 0; a < 3; ++a) {
                  key = SplitMix64(key);
                  img.position[a] += perturb * ToUnitSymmetric(key);
                }
              }
              images.push_back(img);
            }
  return images;
}

}  // namespace

double Distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void RoomScene::Validate() const {
  BEAMKIT_REQUIRE(width > 0 && length > 0 && height > 0, ErrorCode::kInvalidGeometry,
                  "room dimensions must be positive");
  BEAMKIT_REQUIRE(mic_vertices.size() == mics.size(), ErrorCode::kInvalidGeometry,
                  "one cube vertex id per microphone required");
  const std::array<double, 3> dims{width, length, height};
  auto inside = [&](const Vec3& p) {
    for (std::size_t a = 0; a < 3; ++a) {
      if (p[a] < kWallMargin - 1e-9 || p[a] > dims[a] - kWallMargin + 1e-9) return false;
    }
    return true;
  };
  for (const auto& m : mics) {
    BEAMKIT_REQUIRE(inside(m), ErrorCode::kInvalidGeometry, "microphone outside the room margin");
  }
  for (const auto& s : sources) {
    BEAMKIT_REQUIRE(inside(s), ErrorCode::kInvalidGeometry, "source outside the room margin");
  }
  for (const auto& row : reflectivity) {
    for (double r : row) {
      BEAMKIT_REQUIRE(r >= 0.0 && r <= 1.0, ErrorCode::kInvalidGeometry,
                      "reflectivity must lie in [0, 1]");
    }
  }
}

std::vector<std::size_t> MicSubsetVertices(std::size_t mic_subset) {
  switch (mic_subset) {
    case 1: return {0};
    case 2: return {0, 7};
    case 4: return {0, 1, 2, 3};
    case 8: return {0, 1, 2, 3, 4, 5, 6, 7};
    default:
      throw Error(ErrorCode::kInvalidConfig, "microphone subset must be 1, 2, 4 or 8");
  }
}

Vec3 CubeVertex(const Vec3& center, std::size_t vertex) {
  const double h = 0.5 * kCubeSide;
  return {center.x + ((vertex & 1) ? h : -h), center.y + ((vertex & 2) ? h : -h),
          center.z + ((vertex & 4) ? h : -h)};
}

RoomScene SampleScene(std::mt19937_64& rng, std::size_t n_sources, std::size_t mic_subset) {
  BEAMKIT_REQUIRE(n_sources >= 1, ErrorCode::kInvalidInput, "at least one source required");
  const auto vertices = MicSubsetVertices(mic_subset);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  RoomScene scene;
  scene.width = uniform(3.0, 7.0);
  scene.length = uniform(4.0, 8.0);
  scene.height = uniform(2.13, 3.05);
  for (auto& row : scene.reflectivity) {
    for (double& r : row) r = uniform(kReflectivityLow, kReflectivityHigh);
  }
  const std::array<double, 3> dims{scene.width, scene.length, scene.height};
  const double array_margin = kWallMargin + 0.5 * kCubeSide;
  for (std::size_t a = 0; a < 3; ++a) {
    scene.array_center[a] = uniform(array_margin, dims[a] - array_margin);
  }
  scene.mic_vertices = vertices;
  for (std::size_t v : vertices) scene.mics.push_back(CubeVertex(scene.array_center, v));
  while (scene.sources.size() < n_sources) {
    Vec3 p;
    for (std::size_t a = 0; a < 3; ++a) p[a] = uniform(kWallMargin, dims[a] - kWallMargin);
    if (Distance(p, scene.array_center) < kMinSourceArrayDistance) continue;
    scene.sources.push_back(p);
  }
  scene.seed = rng();
  scene.Validate();
  return scene;
}

int DefaultMaxOrder(const RoomScene& scene, std::size_t source_index, std::size_t mic_index) {
  double beta = 0.0;
  for (const auto& row : scene.reflectivity) {
    for (double r : row) beta = std::max(beta, r);
  }
  if (beta <= 0.0) return 0;
  const double d0 = Distance(scene.sources.at(source_index), scene.mics.at(mic_index));
  const double min_dim = std::min({scene.width, scene.length, scene.height});
  for (int order = 1; order <= kMaxOrderCap; ++order) {
    const double r = std::max(d0, (order - 1) * min_dim);
    if (std::pow(beta, order) * d0 / r < 1e-3) return order;
  }
  return kMaxOrderCap;
}

Rir ImageMethodRir(const RoomScene& scene, std::size_t source_index, std::size_t mic_index,
                   const RirOptions& options) {
  BEAMKIT_REQUIRE(source_index < scene.sources.size(), ErrorCode::kInvalidInput,
                  "source index out of range");
  BEAMKIT_REQUIRE(mic_index < scene.mics.size(), ErrorCode::kInvalidInput,
                  "microphone index out of range");
  const Vec3& mic = scene.mics[mic_index];
  BEAMKIT_REQUIRE(Distance(scene.sources[source_index], mic) > 1e-3, ErrorCode::kInvalidGeometry,
                  "source coincides with microphone");
  const int max_order = options.max_order.value_or(DefaultMaxOrder(scene, source_index, mic_index));
  BEAMKIT_REQUIRE(max_order >= 0, ErrorCode::kInvalidConfig, "max order must be >= 0");
  BEAMKIT_REQUIRE(options.perturb >= 0.0, ErrorCode::kInvalidConfig, "perturbation must be >= 0");

  const double sr = static_cast<double>(scene.sample_rate);
  const auto images = EnumerateImages(scene, source_index, max_order, options.perturb);
  double max_delay = 0.0;
  for (const auto& img : images) {
    const bool audible = img.order == 0 || img.gain[0] > 0 || img.gain[1] > 0 || img.gain[2] > 0;
    if (audible) max_delay = std::max(max_delay, Distance(img.position, mic) / kSpeedOfSound * sr);
  }

  Rir rir;
  rir.sample_rate = scene.sample_rate;
  rir.max_order = max_order;
  rir.lead = kSincHalf + kBandHalf;
  const std::size_t len =
      rir.lead + static_cast<std::size_t>(std::ceil(max_delay)) + kSincHalf + kBandHalf + 2;

  std::vector<double> direct(len, 0.0);
  std::array<std::vector<double>, kNumBands> trains;
  for (auto& tr : trains) tr.assign(len, 0.0);
  bool any_reflection = false;
  const double direct_r = Distance(scene.sources[source_index], mic);
  for (const auto& img : images) {
    // Jitter may pull an image nearer than the source itself when the
    // source or mic sits close to a wall; no reflection can beat the direct
    // path.
    const double r = std::max(Distance(img.position, mic), direct_r);
    const double position = static_cast<double>(rir.lead) + r / kSpeedOfSound * sr;
    const double amplitude = 1.0 / (4.0 * std::numbers::pi * r);
    if (img.order == 0) {
      AddFractionalImpulse(direct, position, amplitude);
      continue;
    }
    for (std::size_t b = 0; b < kNumBands; ++b) {
      if (img.gain[b] == 0.0) continue;
      AddFractionalImpulse(trains[b], position, amplitude * img.gain[b]);
      any_reflection = true;
    }
  }

  rir.taps = std::move(direct);
  if (any_reflection) {
    const auto filters = BandFilters(scene.sample_rate);
    for (std::size_t b = 0; b < kNumBands; ++b) {
      const auto& h = filters[b];
      const auto& tr = trains[b];
      for (std::size_t i = 0; i < len; ++i) {
        if (tr[i] == 0.0) continue;
        // Centred filter: output index i + k - half.
        for (std::size_t k = 0; k < h.size(); ++k) {
          const std::ptrdiff_t o = static_cast<std::ptrdiff_t>(i + k) - static_cast<std::ptrdiff_t>(kBandHalf);
          if (o >= 0 && o < static_cast<std::ptrdiff_t>(len)) rir.taps[static_cast<std::size_t>(o)] += tr[i] * h[k];
        }
      }
    }
  }
  return rir;
}

std::ptrdiff_t FirstArrival(const Rir& rir) {
  double peak = 0.0;
  for (double v : rir.taps) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return -1;
  // Early reflections can pile up above the direct path, so detect the
  // onset low and then climb the interpolation kernel to its local peak.
  std::size_t k = 0;
  while (std::abs(rir.taps[k]) < 0.25 * peak) ++k;
  while (k + 1 < rir.taps.size() && std::abs(rir.taps[k + 1]) > std::abs(rir.taps[k])) ++k;
  return static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(rir.lead);
}

std::vector<double> DrawSnrs(std::mt19937_64& rng, std::size_t n_sources) {
  std::normal_distribution<double> snr(0.0, 7.0);
  std::vector<double> out(n_sources, 0.0);
  for (std::size_t s = 1; s < n_sources; ++s) out[s] = snr(rng);
  return out;
}

std::vector<double> ConvolveTruncated(std::span<const double> x, std::span<const double> h,
                                      std::size_t lead) {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty() || h.empty()) return y;
  const std::size_t full = x.size() + h.size() - 1;
  std::size_t n = 1;
  while (n < full) n <<= 1;
  const auto& plans = detail::PlansFor(n);
  detail::FftBuffers bx(n), bh(n);
  std::fill(bx.real.get(), bx.real.get() + n, 0.0);
  std::fill(bh.real.get(), bh.real.get() + n, 0.0);
  std::copy(x.begin(), x.end(), bx.real.get());
  std::copy(h.begin(), h.end(), bh.real.get());
  fftw_execute_dft_r2c(plans.forward, bx.real.get(), bx.spec.get());
  fftw_execute_dft_r2c(plans.forward, bh.real.get(), bh.spec.get());
  fftw_complex* a = bx.spec.get();
  const fftw_complex* b = bh.spec.get();
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    const double re = a[k][0] * b[k][0] - a[k][1] * b[k][1];
    const double im = a[k][0] * b[k][1] + a[k][1] * b[k][0];
    a[k][0] = re;
    a[k][1] = im;
  }
  fftw_execute_dft_c2r(plans.inverse, bx.spec.get(), bx.real.get());
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t idx = i + lead;
    y[i] = idx < full ? bx.real.get()[idx] * scale : 0.0;
  }
  return y;
}

RenderedMixture RenderMixture(const RoomScene& scene, const MultichannelWaveform& sources,
                              const std::vector<double>& snr_db,
                              const std::vector<std::vector<Rir>>* rirs,
                              const RirOptions& options) {
  const std::size_t n_src = sources.channels();
  BEAMKIT_REQUIRE(n_src >= 1, ErrorCode::kInvalidInput, "at least one source waveform required");
  BEAMKIT_REQUIRE(n_src <= scene.sources.size(), ErrorCode::kInvalidInput,
                  "more source waveforms than scene sources");
  BEAMKIT_REQUIRE(snr_db.size() == n_src, ErrorCode::kInvalidInput, "one SNR per source required");
  const std::size_t mics = scene.mics.size();
  const std::size_t n = sources.length();

  RenderedMixture out;
  out.images.assign(n_src, MultichannelWaveform(mics, n, scene.sample_rate));
  const long pairs = static_cast<long>(n_src * mics);
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < pairs; ++p) {
    const std::size_t s = static_cast<std::size_t>(p) / mics;
    const std::size_t m = static_cast<std::size_t>(p) % mics;
    const Rir rir = rirs ? (*rirs)[s][m] : ImageMethodRir(scene, s, m, options);
    const auto y = ConvolveTruncated(sources.channel(s), rir.taps, rir.lead);
    std::copy(y.begin(), y.end(), out.images[s].channel(m).begin());
  }

  auto ref_power = [&](std::size_t s) {
    double e = 0.0;
    for (double v : out.images[s].channel(0)) e += v * v;
    return e / static_cast<double>(std::max<std::size_t>(n, 1));
  };
  const double p1 = ref_power(0);
  BEAMKIT_REQUIRE(p1 > 0.0, ErrorCode::kInvalidInput, "source 1 has zero power");
  out.source_gains.assign(n_src, 1.0);
  for (std::size_t s = 1; s < n_src; ++s) {
    const double ps = ref_power(s);
    BEAMKIT_REQUIRE(ps > 0.0, ErrorCode::kInvalidInput, "source has zero power");
    const double gain = std::sqrt(p1 / (ps * std::pow(10.0, snr_db[s] / 10.0)));
    out.source_gains[s] = gain;
    for (double& v : out.images[s].samples()) v *= gain;
  }

  out.mixture = MultichannelWaveform(mics, n, scene.sample_rate);
  for (std::size_t s = 0; s < n_src; ++s) {
    const auto& img = out.images[s].samples();
    auto& mix = out.mixture.samples();
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += img[i];
  }
  return out;
}

}  // namespace beamkit
