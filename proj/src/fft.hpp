#pragma once

#include <complex>
#include <vector>

namespace nullcurve::detail {

/// Unnormalized in-place DFT. sign = -1 is the forward transform
/// X_k = sum_j x_j e^{-2 pi i jk/n}; sign = +1 the inverse.
void dft(std::vector<std::complex<double>>& data, int sign);

/// Linear convolution of two coefficient sequences.
std::vector<std::complex<double>> convolve(const std::vector<std::complex<double>>& a,
                                           const std::vector<std::complex<double>>& b);

}  // namespace nullcurve::detail
