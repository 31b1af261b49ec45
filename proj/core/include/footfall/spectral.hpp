#pragma once

#include <complex>
#include <vector>

#include "footfall/audio.hpp"

namespace footfall {

/// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

/// One-sided PSD maxima across fixed 50 ms sub-windows of a 5 s window.
struct SpectralFv {
    std::vector<double> values; // length fft_n/2
    int fft_n = 0;
};

/// Splits the window into non-overlapping 50 ms blocks, truncates or
/// zero-pads each to fft_n, computes PSD = |FFT|^2 / fft_n and keeps the
/// elementwise max over blocks (one-sided bins 0 .. fft_n/2-1).
SpectralFv spectral_fv_case3(const AudioWindow& window, int fft_n);

} // namespace footfall
