// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Independent reference computations built on Eigen.

#pragma once

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "beamkit/beamform.hpp"
#include "beamkit/stft.hpp"

namespace beamkit::testing {

// Random context spectrogram with M mics, T frames and a tiny STFT layout.
inline ContextSpectrogram RandomContext(std::mt19937_64& rng, std::size_t mics, std::size_t frames,
                                        const ContextConfig& ctx, std::size_t bins = 5) {
  StftConfig c;
  c.win_len = 2 * (bins - 1);
  c.hop = c.win_len / 2;
  c.fft_size = c.win_len;
  MultichannelSpectrogram spec(mics, frames, c, frames * c.hop - (c.win_len - c.hop));
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : spec.data()) v = Complex(g(rng), g(rng));
  return ExpandContext(spec, ctx);
}

// MCWF weights as the solution of the regularized least-squares problem
//   min_w (1/T) sum_t |a_t y_ref(t) - w^H y(t)|^2 + lambda ||w||^2,
//   lambda = loading * tr(Phi_y) / dim,
// solved by complete orthogonal decomposition of the stacked system rather
// than through any covariance matrix.
inline std::vector<Complex> LeastSquaresWeights(const ContextSpectrogram& ctx,
                                                std::span<const double> mask_plane,
                                                std::size_t f, std::size_t pos, double loading) {
  const std::size_t T = ctx.frames();
  const std::size_t dim = ctx.dim();
  double trace = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (const Complex& v : ctx.vec(t, f)) trace += std::norm(v);
  }
  const double lambda = loading * trace / static_cast<double>(T) / static_cast<double>(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(T + dim, dim);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(T + dim);
  const double row_scale = 1.0 / std::sqrt(static_cast<double>(T));
  for (std::size_t t = 0; t < T; ++t) {
    const auto y = ctx.vec(t, f);
    for (std::size_t i = 0; i < dim; ++i) a(t, i) = row_scale * y[i];
    b(t) = row_scale * mask_plane[t * ctx.bins() + f] * y[pos];
  }
  for (std::size_t i = 0; i < dim; ++i) a(T + i, i) = std::sqrt(lambda);
  // v solves a v = b with w^H y = y^T v, i.e. w = conj(v).
  const Eigen::VectorXcd v = a.completeOrthogonalDecomposition().solve(b);
  std::vector<Complex> w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = std::conj(v(i));
  return w;
}

// Dense per-(t, f) solve of the time-varying filter with Eigen.
inline Complex DenseTvfOutput(const std::vector<Eigen::MatrixXcd>& source_cov, std::size_t s,
                              std::size_t pos, double loading, std::span<const Complex> y) {
  const std::size_t dim = y.size();
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& c : source_cov) mix += c;
  mix += loading * mix.trace().real() / static_cast<double>(dim) *
         Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::VectorXcd w = mix.ldlt().solve(source_cov[s].col(pos));
  Complex out = 0.0;
  for (std::size_t i = 0; i < dim; ++i) out += std::conj(w(i)) * y[i];
  return out;
}

inline std::vector<Complex> Subtract(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline double Norm(std::span<const Complex> a) {
  double e = 0.0;
  for (const Complex& v : a) e += std::norm(v);
  return std::sqrt(e);
}

}  // namespace beamkit::testing
