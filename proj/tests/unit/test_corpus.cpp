#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "footfall/corpus.hpp"
#include "footfall/spectral.hpp"

using namespace footfall;

namespace {

// PSD-weighted mean frequency over the first 8192 samples
double spectral_centroid(const AudioBuffer& buf) {
    const std::size_t n = 8192;
    REQUIRE(buf.samples.size() >= n);
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = {buf.samples[i], 0.0};
    fft_radix2(x);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double p = std::norm(x[k]);
        const double f = static_cast<double>(k) * buf.sample_rate_hz / static_cast<double>(n);
        num += f * p;
        den += p;
    }
    return num / den;
}

// envelope peak picking: rectified moving average, local maxima above a
// fraction of the global peak, minimum spacing between detections
std::size_t count_transients(const AudioBuffer& buf, double min_spacing_s) {
    const std::size_t win = static_cast<std::size_t>(0.005 * buf.sample_rate_hz);
    std::vector<double> env(buf.samples.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
        acc += std::abs(buf.samples[i]);
        if (i >= win) acc -= std::abs(buf.samples[i - win]);
        env[i] = acc / static_cast<double>(win);
    }
    const double thresh = 0.35 * *std::max_element(env.begin(), env.end());
    const auto spacing = static_cast<std::size_t>(min_spacing_s * buf.sample_rate_hz);
    std::size_t count = 0;
    std::size_t last = 0;
    bool armed = true;
    for (std::size_t i = 0; i < env.size(); ++i) {
        if (armed && env[i] > thresh) {
            if (count == 0 || i - last >= spacing) {
                ++count;
                last = i;
            }
            armed = false;
        } else if (!armed && env[i] < 0.5 * thresh) {
            armed = true;
        }
    }
    return count;
}

} // namespace

TEST_CASE("background generation is deterministic and sized correctly") {
    for (auto kind : {NoiseKind::Crickets, NoiseKind::Birds, NoiseKind::Rain, NoiseKind::Wind}) {
        const auto a = synth_background(kind, 5.0, 77);
        const auto b = synth_background(kind, 5.0, 77);
        CHECK(a.samples == b.samples);
        CHECK(a.samples.size() == 55125);
        const auto c = synth_background(kind, 5.0, 78);
        CHECK(a.samples != c.samples);
    }
}

TEST_CASE("wind sits below crickets in spectral centroid") {
    const auto wind = synth_background(NoiseKind::Wind, 2.0, 5);
    const auto crickets = synth_background(NoiseKind::Crickets, 2.0, 5);
    CHECK(spectral_centroid(wind) < spectral_centroid(crickets));
}

TEST_CASE("unknown noise kind name is rejected") {
    CHECK_THROWS_AS(noise_kind_from_string("thunder"), ParameterError);
    CHECK(noise_kind_from_string("rain") == NoiseKind::Rain);
}

TEST_CASE("footstep transient count tracks the step rate") {
    FootstepParams p;
    p.step_rate_min_hz = 2.0;
    p.step_rate_max_hz = 2.0 + 1e-9;
    const auto buf = synth_footsteps(1, 5.0, 21, 11025, p);
    const auto transients = count_transients(buf, 0.3);
    CHECK(transients >= 8);
    CHECK(transients <= 12);
}

TEST_CASE("footstep argument checks and determinism") {
    CHECK_THROWS_AS(synth_footsteps(0, 5.0, 1), ParameterError);
    CHECK_THROWS_AS(synth_footsteps(4, 5.0, 1), ParameterError);
    const auto a = synth_footsteps(2, 3.0, 9);
    const auto b = synth_footsteps(2, 3.0, 9);
    CHECK(a.samples == b.samples);
}

TEST_CASE("mix identities") {
    AudioBuffer x;
    x.sample_rate_hz = 1000;
    x.samples = {0.1, -0.4, 0.9, 0.0};
    CHECK(mix({x}, {1.0}).samples == x.samples);
    CHECK(mix({x, x}, {0.5, 0.5}).samples == x.samples);
    const auto zero = mix({x, x}, {0.0, 0.0});
    for (double v : zero.samples) CHECK(v == 0.0);

    AudioBuffer y = x;
    y.samples.pop_back();
    CHECK_THROWS_AS(mix({x, y}, {0.5, 0.5}), ParameterError);
    CHECK_THROWS_AS(mix({x}, {1.5}), ParameterError);
}

TEST_CASE("roll is a circular group action") {
    AudioBuffer x;
    x.sample_rate_hz = 1000;
    x.samples = {1, 2, 3};
    CHECK(augment_roll(x, 1).samples == std::vector<double>{3, 1, 2});
    CHECK(augment_roll(x, 0).samples == x.samples);
    const auto rolled = augment_roll(augment_roll(x, 2), 1);
    CHECK(rolled.samples == x.samples);
    CHECK(augment_roll(x, 5).samples == augment_roll(x, 2).samples);
}

TEST_CASE("additive noise hits the requested SNR") {
    const auto sig = synth_background(NoiseKind::Crickets, 1.0, 3);
    const auto noisy = augment_noise(sig, 20.0, 55);
    double sp = 0.0, np = 0.0;
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        sp += sig.samples[i] * sig.samples[i];
        const double n = noisy.samples[i] - sig.samples[i];
        np += n * n;
    }
    const double snr = 10.0 * std::log10(sp / np);
    CHECK(std::abs(snr - 20.0) <= 0.1);

    CHECK(augment_noise(sig, std::numeric_limits<double>::infinity(), 1).samples == sig.samples);
    CHECK(augment_noise(sig, 20.0, 55).samples == noisy.samples);

    AudioBuffer silent;
    silent.sample_rate_hz = 1000;
    silent.samples.assign(100, 0.0);
    CHECK_THROWS_AS(augment_noise(silent, 20.0, 1), ParameterError);
}

TEST_CASE("largest-remainder split matches the frozen references") {
    const SplitWeights w;
    CHECK(largest_remainder_split(12352, w) == std::array<std::size_t, 3>{9024, 1664, 1664});
    CHECK(largest_remainder_split(100, w) == std::array<std::size_t, 3>{73, 13, 14});
    CHECK(largest_remainder_split(800, w) == std::array<std::size_t, 3>{584, 108, 108});
    // seats always conserved
    for (std::size_t total : {1ul, 7ul, 99ul, 1001ul}) {
        const auto s = largest_remainder_split(total, w);
        CHECK(s[0] + s[1] + s[2] == total);
    }
}

TEST_CASE("build_dataset balances classes and keeps splits disjoint") {
    SynthSpec spec;
    spec.seed = 11;
    spec.per_class = 50;
    spec.window_s = 1.0; // short windows keep the test quick

    const auto ds = build_dataset(spec);
    CHECK(ds.train.size() == 73);
    CHECK(ds.validation.size() == 13);
    CHECK(ds.test.size() == 14);

    std::set<std::uint64_t> ids;
    for (const auto* split : {&ds.train, &ds.validation, &ds.test}) {
        long c0 = 0, c1 = 0;
        for (const auto& lw : *split) {
            ids.insert(lw.meta.id);
            (lw.label == 0 ? c0 : c1)++;
            CHECK(lw.window.samples.size() == 11025);
            if (lw.label == 1) {
                CHECK(lw.meta.walkers >= 1);
                CHECK(lw.meta.walkers <= 3);
            }
        }
        CHECK(std::labs(c0 - c1) <= 1);
    }
    CHECK(ids.size() == 100); // index partition, no overlaps
}

TEST_CASE("build_dataset is a pure function of its spec") {
    SynthSpec spec;
    spec.seed = 4;
    spec.per_class = 6;
    spec.window_s = 0.5;
    const auto a = build_dataset(spec);
    const auto b = build_dataset(spec);
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i)
        CHECK(a.train[i].window.samples == b.train[i].window.samples);
}
