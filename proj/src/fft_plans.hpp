// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>

namespace beamkit::detail {

struct RealFftPlans {
  fftw_plan forward;  // r2c
  fftw_plan inverse;  // c2r, unnormalized
};

// Plans are created once per size under a lock (FFTW planning is not
// thread-safe) and executed with the new-array interface.
const RealFftPlans& PlansFor(std::size_t n);

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

struct FftBuffers {
  explicit FftBuffers(std::size_t n)
      : real(fftw_alloc_real(n)), spec(fftw_alloc_complex(n / 2 + 1)) {}
  std::unique_ptr<double, FftwDeleter> real;
  std::unique_ptr<fftw_complex, FftwDeleter> spec;
};

}  // namespace beamkit::detail
