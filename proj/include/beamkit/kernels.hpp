// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Complex arithmetic inner loops shared by covariance estimation,
// beamformer application and masking. Every kernel has a scalar reference
// implementation; the AVX2/FMA variant is chosen at runtime when the CPU
// supports it and is tested for equivalence against the scalar one.

#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "beamkit/signal_types.hpp"

namespace beamkit::kernels {

enum class Isa { kScalar, kAvx2 };

std::string ToString(Isa isa);

// acc (n x n, row-major) += weight * y * y^H
using AccumulateOuterFn = void (*)(const Complex* y, std::size_t n, double weight,
                                   Complex* acc);
// sum_k conj(w[k]) * y[k]
using DotConjFn = Complex (*)(const Complex* w, const Complex* y, std::size_t n);
// out[k] = |x[k]|^2
using Abs2Fn = void (*)(const Complex* x, std::size_t n, double* out);
// out[k] = gain[k] * x[k]; out may alias x
using ScaleByRealFn = void (*)(const Complex* x, const double* gain, std::size_t n,
                               Complex* out);

struct KernelTable {
  Isa isa;
  AccumulateOuterFn accumulate_outer;
  DotConjFn dot_conj;
  Abs2Fn abs2;
  ScaleByRealFn scale_by_real;
};

namespace scalar {
void AccumulateOuter(const Complex* y, std::size_t n, double weight, Complex* acc);
Complex DotConj(const Complex* w, const Complex* y, std::size_t n);
void Abs2(const Complex* x, std::size_t n, double* out);
void ScaleByReal(const Complex* x, const double* gain, std::size_t n, Complex* out);
}  // namespace scalar

namespace avx2 {
void AccumulateOuter(const Complex* y, std::size_t n, double weight, Complex* acc);
Complex DotConj(const Complex* w, const Complex* y, std::size_t n);
void Abs2(const Complex* x, std::size_t n, double* out);
void ScaleByReal(const Complex* x, const double* gain, std::size_t n, Complex* out);
}  // namespace avx2

bool IsaSupported(Isa isa);
const KernelTable& TableFor(Isa isa);

// The table in use. Defaults to the widest supported ISA unless the
// environment variable BEAMKIT_ISA=scalar is set.
const KernelTable& Active();
// Overrides the active ISA (tests, benchmarking). Throws when unsupported.
void SetActiveIsa(Isa isa);

inline void AccumulateOuter(std::span<const Complex> y, double weight, std::span<Complex> acc) {
  Active().accumulate_outer(y.data(), y.size(), weight, acc.data());
}
inline Complex DotConj(std::span<const Complex> w, std::span<const Complex> y) {
  return Active().dot_conj(w.data(), y.data(), w.size());
}
inline void Abs2(std::span<const Complex> x, std::span<double> out) {
  Active().abs2(x.data(), x.size(), out.data());
}
inline void ScaleByReal(std::span<const Complex> x, std::span<const double> gain,
                        std::span<Complex> out) {
  Active().scale_by_real(x.data(), gain.data(), x.size(), out.data());
}

}  // namespace beamkit::kernels
