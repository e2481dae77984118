#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace nlslab {

using cplx = std::complex<double>;

/// Smallest even n >= min_size whose only prime factors are 2, 3 and 5.
std::size_t fft_size_at_least(std::size_t min_size);

enum class FftDirection { Forward, Backward };

/// Unnormalized DFT of `data` in place.
///   Forward:  X_k = sum_j x_j e^{-2 pi i jk/n}
///   Backward: x_j = sum_k X_k e^{+2 pi i jk/n}
/// Plans are cached per thread and per size; creation is serialized through
/// a global lock, execution is lock-free.
void fft_inplace(std::span<cplx> data, FftDirection dir);

}  // namespace nlslab
