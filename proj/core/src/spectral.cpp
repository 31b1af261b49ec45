#include "footfall/spectral.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace footfall {

void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ParameterError("FFT size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = x[i + k];
                const auto v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

SpectralFv spectral_fv_case3(const AudioWindow& window, int fft_n) {
    if (fft_n < 2 || fft_n > 512 || (fft_n & (fft_n - 1)) != 0)
        throw ParameterError("fft_n must be a power of two <= 512");

    const std::size_t sub_len = static_cast<std::size_t>(
        std::llround(0.050 * window.sample_rate_hz)); // 50 ms blocks
    if (sub_len == 0) throw ParameterError("sample rate too low for 50 ms blocks");
    const std::size_t n_blocks = window.samples.size() / sub_len;

    SpectralFv fv;
    fv.fft_n = fft_n;
    fv.values.assign(static_cast<std::size_t>(fft_n / 2), 0.0);

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_n));
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double* src = window.samples.data() + b * sub_len;
        const std::size_t copy = std::min<std::size_t>(sub_len, static_cast<std::size_t>(fft_n));
        for (std::size_t i = 0; i < static_cast<std::size_t>(fft_n); ++i)
            buf[i] = (i < copy) ? std::complex<double>(src[i], 0.0) : 0.0;
        fft_radix2(buf);
        for (std::size_t k = 0; k < fv.values.size(); ++k) {
            const double psd = std::norm(buf[k]) / fft_n;
            if (psd > fv.values[k]) fv.values[k] = psd;
        }
    }
    return fv;
}

} // namespace footfall
