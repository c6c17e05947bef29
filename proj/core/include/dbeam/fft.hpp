#pragma once

#include <complex>
#include <vector>

namespace dbeam::fft {

/// In-order complex DFT/IDFT of arbitrary length (FFTW backend, plans cached
/// per size). The inverse is scaled by 1/n so ifft(fft(x)) == x.
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

} // namespace dbeam::fft
