// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>

#include "beamkit/signal_types.hpp"

namespace beamkit {

// Adds delta * (trace / n) to the diagonal of the row-major n x n matrix.
void LoadDiagonal(std::span<Complex> matrix, std::size_t n, double delta);

// In-place Cholesky factorization A = L L^H of a Hermitian positive
// definite matrix; the lower triangle receives L. Returns false when a pivot
// is not strictly positive or not finite.
bool CholeskyFactor(std::span<Complex> matrix, std::size_t n);

// Solves L L^H x = b in place given the factor from CholeskyFactor.
void CholeskySolve(std::span<const Complex> factor, std::size_t n, std::span<Complex> rhs);

bool AllFinite(std::span<const Complex> values);

}  // namespace beamkit
