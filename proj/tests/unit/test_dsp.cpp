#include <doctest.h>

#include <cmath>
#include <numbers>

#include "footfall/dsp.hpp"
#include "footfall/rng.hpp"

using namespace footfall;

namespace {

AudioBuffer tone(double freq_hz, double duration_s, int rate, double amp = 1.0) {
    AudioBuffer buf;
    buf.sample_rate_hz = rate;
    const auto n = static_cast<std::size_t>(duration_s * rate);
    buf.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        buf.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz *
                                        static_cast<double>(i) / rate);
    return buf;
}

double rms_mid(const std::vector<double>& x) {
    const std::size_t a = x.size() / 5;
    const std::size_t b = x.size() - a;
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i) acc += x[i] * x[i];
    return std::sqrt(acc / static_cast<double>(b - a));
}

} // namespace

TEST_CASE("designed filter meets the stopband spec at 6 kHz") {
    const FilterSpec spec; // 5 kHz / 6 kHz / 40 dB
    const auto taps = design_lowpass_fir(spec, 44100);
    // direct frequency-response oracle at the band edges
    const double h_stop = fir_response_at(taps, 6000.0, 44100);
    CHECK(20.0 * std::log10(h_stop) <= -40.0);
    const double h_pass = fir_response_at(taps, 4000.0, 44100);
    CHECK(h_pass == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("DC input passes with unit gain") {
    AudioBuffer buf;
    buf.sample_rate_hz = 44100;
    buf.samples.assign(8000, 0.5);
    const auto out = lowpass(buf, FilterSpec{});
    CHECK(out.samples.size() == buf.samples.size());
    CHECK(out.samples[4000] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("6 kHz tone attenuated by at least 40 dB") {
    const auto in = tone(6000.0, 0.25, 44100);
    const auto out = lowpass(in, FilterSpec{});
    const double drop_db = 20.0 * std::log10(rms_mid(out.samples) / rms_mid(in.samples));
    CHECK(drop_db <= -40.0);
}

TEST_CASE("zero signal stays zero") {
    AudioBuffer buf;
    buf.sample_rate_hz = 44100;
    buf.samples.assign(4096, 0.0);
    const auto out = lowpass(buf, FilterSpec{});
    for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("invalid band edges are rejected") {
    AudioBuffer buf;
    buf.sample_rate_hz = 11025;
    buf.samples.assign(100, 0.0);
    FilterSpec bad;
    bad.passband_hz = 5000.0;
    bad.stopband_hz = 6000.0; // >= Nyquist at 11025
    CHECK_THROWS_AS(lowpass(buf, bad), ParameterError);
}

TEST_CASE("4:1 decimation arithmetic") {
    AudioBuffer buf;
    buf.sample_rate_hz = 44100;
    buf.samples.assign(220500, 0.0);
    const auto out = resample(buf, 11025);
    CHECK(out.sample_rate_hz == 11025);
    CHECK(out.samples.size() == 55125);
}

TEST_CASE("resample is the identity at the source rate") {
    auto buf = tone(440.0, 0.1, 11025);
    const auto out = resample(buf, 11025);
    CHECK(out.samples == buf.samples);
}

TEST_CASE("DC survives integer and rational resampling") {
    AudioBuffer buf;
    buf.sample_rate_hz = 44100;
    buf.samples.assign(44100, 0.3);
    const auto dec = resample(buf, 11025);
    CHECK(dec.samples[dec.samples.size() / 2] == doctest::Approx(0.3).epsilon(1e-9));
    const auto rat = resample(buf, 12500);
    CHECK(rat.sample_rate_hz == 12500);
    CHECK(rat.samples[rat.samples.size() / 2] == doctest::Approx(0.3).epsilon(1e-9));
    // duration preserved within one sample
    CHECK(std::llabs(static_cast<long long>(rat.samples.size()) - 12500) <= 1);
}

TEST_CASE("rational resampling keeps an in-band tone") {
    const auto in = tone(1000.0, 0.5, 44100, 0.7);
    const auto out = resample(in, 12500);
    const auto ref = tone(1000.0, 0.5, 12500, 0.7);
    // compare RMS rather than samples (group delay of the polyphase kernel)
    CHECK(rms_mid(out.samples) == doctest::Approx(rms_mid(ref.samples)).epsilon(0.02));
}

TEST_CASE("resample to target twice equals once") {
    const auto in = tone(900.0, 0.3, 44100, 0.5);
    const auto once = resample(in, 11025);
    const auto twice = resample(once, 11025);
    CHECK(once.samples == twice.samples);
}

TEST_CASE("window_stream counts and tiling") {
    AudioBuffer buf;
    buf.sample_rate_hz = 1000;
    buf.samples.assign(10000, 0.0); // 10 s

    SUBCASE("10 s / 5 s window / 0.5 s hop gives 11 windows") {
        const auto w = window_stream(buf, 5.0, 0.5);
        CHECK(w.size() == 11);
    }
    SUBCASE("exactly one window when sizes match") {
        buf.samples.resize(5000);
        const auto w = window_stream(buf, 5.0, 5.0);
        CHECK(w.size() == 1);
    }
    SUBCASE("partial trailing window discarded") {
        buf.samples.resize(4900);
        const auto w = window_stream(buf, 5.0, 5.0);
        CHECK(w.empty());
    }
    SUBCASE("window k starts at round(k*hop*rate)") {
        for (std::size_t i = 0; i < buf.samples.size(); ++i)
            buf.samples[i] = static_cast<double>(i);
        const auto w = window_stream(buf, 5.0, 0.5);
        for (std::size_t k = 0; k < w.size(); ++k)
            CHECK(w[k].samples.front() ==
                  doctest::Approx(std::llround(static_cast<double>(k) * 0.5 * 1000.0)));
    }
}

TEST_CASE("window_stream rejects bad hops") {
    AudioBuffer buf;
    buf.sample_rate_hz = 1000;
    buf.samples.assign(1000, 0.0);
    CHECK_THROWS_AS(window_stream(buf, 1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(window_stream(buf, 0.5, 1.0), ParameterError);
}
