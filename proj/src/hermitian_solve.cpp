// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/hermitian_solve.hpp"

#include <cmath>

namespace beamkit {

void LoadDiagonal(std::span<Complex> matrix, std::size_t n, double delta) {
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += matrix[i * n + i].real();
  const double load = delta * trace / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) matrix[i * n + i] += load;
}

bool CholeskyFactor(std::span<Complex> a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a[j * n + j].real();
    for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(a[j * n + k]);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
    const double diag = std::sqrt(pivot);
    a[j * n + j] = diag;
    const double inv = 1.0 / diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * std::conj(a[j * n + k]);
      a[i * n + j] = sum * inv;
    }
  }
  return true;
}

void CholeskySolve(std::span<const Complex> l, std::size_t n, std::span<Complex> b) {
  // L z = b
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
    b[i] = sum / l[i * n + i].real();
  }
  // L^H x = z
  for (std::size_t ii = n; ii-- > 0;) {
    Complex sum = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= std::conj(l[k * n + ii]) * b[k];
    b[ii] = sum / l[ii * n + ii].real();
  }
}

bool AllFinite(std::span<const Complex> values) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace beamkit
