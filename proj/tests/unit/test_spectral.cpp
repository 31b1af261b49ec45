#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "footfall/rng.hpp"
#include "footfall/spectral.hpp"

using namespace footfall;

namespace {

AudioWindow five_second_window(const std::vector<double>& samples, int rate = 11025) {
    AudioWindow w;
    w.sample_rate_hz = rate;
    w.duration_s = static_cast<double>(samples.size()) / rate;
    w.samples = samples;
    return w;
}

} // namespace

TEST_CASE("silence maps to an all-zero spectral FV") {
    const auto fv = spectral_fv_case3(five_second_window(std::vector<double>(55125, 0.0)), 128);
    CHECK(fv.values.size() == 64);
    for (double v : fv.values) CHECK(v == 0.0);
}

TEST_CASE("FV length is fft_n/2") {
    const std::vector<double> x(55125, 0.1);
    CHECK(spectral_fv_case3(five_second_window(x), 16).values.size() == 8);
    CHECK(spectral_fv_case3(five_second_window(x), 512).values.size() == 256);
}

TEST_CASE("non-power-of-two sizes are rejected") {
    const std::vector<double> x(5512, 0.0);
    CHECK_THROWS_AS(spectral_fv_case3(five_second_window(x), 100), ParameterError);
    CHECK_THROWS_AS(spectral_fv_case3(five_second_window(x), 1024), ParameterError);
}

TEST_CASE("a tone at a bin center concentrates the maximum there") {
    // bin k of an N-point FFT over the truncated 50 ms block sits at
    // k * fs / N; pick k = 8, N = 128
    const int rate = 11025;
    const int fft_n = 128;
    const int k = 8;
    const double freq = static_cast<double>(k) * rate / fft_n;
    std::vector<double> x(55125);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
    const auto fv = spectral_fv_case3(five_second_window(x), fft_n);
    const auto it = std::max_element(fv.values.begin(), fv.values.end());
    CHECK(static_cast<int>(it - fv.values.begin()) == k);
    // closed-form: |X_k| = N/2 for a unit sinusoid aligned to bin k,
    // so PSD = (N/2)^2 / N = N/4
    CHECK(*it == doctest::Approx(fft_n / 4.0).epsilon(1e-6));
}

TEST_CASE("Parseval holds per block within 1e-9 relative") {
    RandomStream rng(3);
    const int n = 256;
    std::vector<std::complex<double>> buf(n);
    double time_energy = 0.0;
    for (auto& c : buf) {
        c = {rng.uniform(-1.0, 1.0), 0.0};
        time_energy += std::norm(c);
    }
    auto freq = buf;
    fft_radix2(freq);
    double psd_sum = 0.0;
    for (const auto& c : freq) psd_sum += std::norm(c) / n;
    CHECK(psd_sum == doctest::Approx(time_energy).epsilon(1e-9));
}

TEST_CASE("elementwise max is invariant to sub-window order") {
    RandomStream rng(17);
    std::vector<double> x(55125);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const auto base = spectral_fv_case3(five_second_window(x), 64);

    // rotate whole 50 ms blocks: same set of blocks, different order
    const std::size_t block = 551;
    std::vector<double> rotated(x.size());
    const std::size_t nb = x.size() / block;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t src = ((b + 37) % nb) * block;
        std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(src), block,
                    rotated.begin() + static_cast<std::ptrdiff_t>(b * block));
    }
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(nb * block), x.end(),
              rotated.begin() + static_cast<std::ptrdiff_t>(nb * block));
    const auto rot = spectral_fv_case3(five_second_window(rotated), 64);
    CHECK(base.values == rot.values);
}
