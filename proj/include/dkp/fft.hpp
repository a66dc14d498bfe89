#pragma once
#include <complex>
#include <vector>

namespace dkp {

//! In-place iterative radix-2 FFT. Length must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

bool is_pow2(std::size_t n);

//! FFT mode wavenumbers for grid spacing dx: 2*pi*m/(n*dx) with m wrapped to
//! (-n/2, n/2].
std::vector<double> fft_wavenumbers(std::size_t n, double dx);

}  // namespace dkp
