// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Built with -mavx2 -mfma. Nothing in here may run unless dispatch has
// confirmed CPU support.

#include "beamkit/kernels.hpp"

#if defined(BEAMKIT_HAVE_AVX2_TU)
#include <immintrin.h>
#endif

namespace beamkit::kernels::avx2 {

#if defined(BEAMKIT_HAVE_AVX2_TU)

namespace {

// A __m256d holds two complex doubles laid out as [re0, im0, re1, im1].
inline __m256d Load2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}
inline void Store2(Complex* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

}  // namespace

void AccumulateOuter(const Complex* y, std::size_t n, double weight, Complex* acc) {
  const __m256d odd_sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double sr = weight * y[i].real();
    const double si = weight * y[i].imag();
    const __m256d vsr = _mm256_set1_pd(sr);
    const __m256d vsi = _mm256_set1_pd(si);
    Complex* row = acc + i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d v = Load2(y + j);
      const __m256d swapped = _mm256_permute_pd(v, 0b0101);
      const __m256d cross = _mm256_mul_pd(vsi, swapped);
      // even: sr*a + si*b, odd: sr*b - si*a (sign flipped below)
      __m256d prod = _mm256_fmsubadd_pd(vsr, v, cross);
      prod = _mm256_xor_pd(prod, odd_sign);
      Store2(row + j, _mm256_add_pd(Load2(row + j), prod));
    }
    for (; j < n; ++j) {
      const double a = y[j].real();
      const double b = y[j].imag();
      row[j] = Complex(row[j].real() + (sr * a + si * b), row[j].imag() + (si * a - sr * b));
    }
  }
}

Complex DotConj(const Complex* w, const Complex* y, std::size_t n) {
  __m256d direct = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vw = Load2(w + k);
    const __m256d vy = Load2(y + k);
    direct = _mm256_fmadd_pd(vw, vy, direct);
    cross = _mm256_fmadd_pd(vw, _mm256_permute_pd(vy, 0b0101), cross);
  }
  alignas(32) double d[4];
  alignas(32) double c[4];
  _mm256_store_pd(d, direct);
  _mm256_store_pd(c, cross);
  // direct = [wr*a, wi*b, ...], cross = [wr*b, wi*a, ...]
  double re = (d[0] + d[1]) + (d[2] + d[3]);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; k < n; ++k) {
    const double wr = w[k].real(), wi = w[k].imag();
    const double a = y[k].real(), b = y[k].imag();
    re += wr * a + wi * b;
    im += wr * b - wi * a;
  }
  return {re, im};
}

void Abs2(const Complex* x, std::size_t n, double* out) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = Load2(x + k);
    const __m256d b = Load2(x + k + 2);
    const __m256d sums = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    // hadd order is [x0, x2, x1, x3]
    _mm256_storeu_pd(out + k, _mm256_permute4x64_pd(sums, 0b11011000));
  }
  for (; k < n; ++k) {
    out[k] = x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
}

void ScaleByReal(const Complex* x, const double* gain, std::size_t n, Complex* out) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d g = _mm256_set_pd(gain[k + 1], gain[k + 1], gain[k], gain[k]);
    Store2(out + k, _mm256_mul_pd(g, Load2(x + k)));
  }
  for (; k < n; ++k) {
    out[k] = Complex(gain[k] * x[k].real(), gain[k] * x[k].imag());
  }
}

#else  // no AVX2 translation unit on this target: forward to the reference

void AccumulateOuter(const Complex* y, std::size_t n, double weight, Complex* acc) {
  scalar::AccumulateOuter(y, n, weight, acc);
}
Complex DotConj(const Complex* w, const Complex* y, std::size_t n) {
  return scalar::DotConj(w, y, n);
}
void Abs2(const Complex* x, std::size_t n, double* out) { scalar::Abs2(x, n, out); }
void ScaleByReal(const Complex* x, const double* gain, std::size_t n, Complex* out) {
  scalar::ScaleByReal(x, gain, n, out);
}

#endif

}  // namespace beamkit::kernels::avx2
