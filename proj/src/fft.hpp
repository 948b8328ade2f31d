#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lplab::detail {

/// In-place unnormalized DFT on an n or n x n array (row-major).
/// forward: sum x_m exp(-2 pi i m k / n); inverse uses the + sign.
void fft_inplace(std::span<std::complex<double>> data, int dimension, std::size_t n, bool inverse);

}  // namespace lplab::detail
