// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/kernels.hpp"

namespace beamkit::kernels::scalar {

// Written on real/imaginary parts so the reference does not go through the
// Annex G checks of std::complex multiplication.

void AccumulateOuter(const Complex* y, std::size_t n, double weight, Complex* acc) {
  for (std::size_t i = 0; i < n; ++i) {
    const double sr = weight * y[i].real();
    const double si = weight * y[i].imag();
    Complex* row = acc + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = y[j].real();
      const double b = y[j].imag();
      row[j] = Complex(row[j].real() + (sr * a + si * b), row[j].imag() + (si * a - sr * b));
    }
  }
}

Complex DotConj(const Complex* w, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double wr = w[k].real(), wi = w[k].imag();
    const double a = y[k].real(), b = y[k].imag();
    re += wr * a + wi * b;
    im += wr * b - wi * a;
  }
  return {re, im};
}

void Abs2(const Complex* x, std::size_t n, double* out) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
}

void ScaleByReal(const Complex* x, const double* gain, std::size_t n, Complex* out) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = Complex(gain[k] * x[k].real(), gain[k] * x[k].imag());
  }
}

}  // namespace beamkit::kernels::scalar
