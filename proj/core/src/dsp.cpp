#include "footfall/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace footfall {

namespace {

constexpr double kPi = std::numbers::pi;

// series expansion of I0, converges fast for the beta range used here
double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double kaiser_beta(double atten_db) {
    if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
    if (atten_db >= 21.0)
        return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
    return 0.0;
}

std::vector<double> kaiser_sinc(double cutoff_norm, double atten_db, double transition_norm) {
    // cutoff_norm, transition_norm in cycles/sample
    const double beta = kaiser_beta(atten_db);
    int n = static_cast<int>(
        std::ceil((atten_db - 7.95) / (2.285 * 2.0 * kPi * transition_norm))) + 1;
    if (n % 2 == 0) ++n; // odd => integer group delay
    if (n < 11) n = 11;

    std::vector<double> taps(static_cast<std::size_t>(n));
    const double center = (n - 1) / 2.0;
    const double i0b = bessel_i0(beta);
    for (int i = 0; i < n; ++i) {
        const double t = i - center;
        const double sinc = (t == 0.0) ? 2.0 * cutoff_norm
                                       : std::sin(2.0 * kPi * cutoff_norm * t) / (kPi * t);
        const double r = 2.0 * t / (n - 1);
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        taps[static_cast<std::size_t>(i)] = sinc * w;
    }
    const double dc = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (double& h : taps) h /= dc;
    return taps;
}

std::vector<double> convolve_centered(const std::vector<double>& x,
                                      const std::vector<double>& taps) {
    const std::size_t n = x.size();
    const std::size_t delay = (taps.size() - 1) / 2;
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps.size(); ++k) {
            const std::ptrdiff_t j =
                static_cast<std::ptrdiff_t>(i + delay) - static_cast<std::ptrdiff_t>(k);
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(n))
                acc += taps[k] * x[static_cast<std::size_t>(j)];
        }
        y[i] = acc;
    }
    return y;
}

} // namespace

std::vector<double> design_lowpass_fir(const FilterSpec& spec, int sample_rate_hz) {
    validate(spec, sample_rate_hz);
    const double fs = sample_rate_hz;
    const double cutoff = 0.5 * (spec.passband_hz + spec.stopband_hz) / fs;
    const double transition = (spec.stopband_hz - spec.passband_hz) / fs;
    // small design margin keeps the measured response at the stopband edge
    // at or below the requested attenuation
    return kaiser_sinc(cutoff, spec.stopband_atten_db + 3.0, transition);
}

double fir_response_at(const std::vector<double>& taps, double freq_hz, int sample_rate_hz) {
    const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        re += taps[k] * std::cos(w * static_cast<double>(k));
        im -= taps[k] * std::sin(w * static_cast<double>(k));
    }
    return std::hypot(re, im);
}

AudioBuffer lowpass(const AudioBuffer& buf, const FilterSpec& spec) {
    const auto taps = design_lowpass_fir(spec, buf.sample_rate_hz);
    return AudioBuffer{convolve_centered(buf.samples, taps), buf.sample_rate_hz};
}

AudioBuffer resample(const AudioBuffer& buf, int target_hz) {
    if (target_hz <= 0) throw ParameterError("target rate must be positive");
    if (buf.sample_rate_hz <= 0) throw ParameterError("source rate must be positive");
    if (target_hz == buf.sample_rate_hz) return buf;

    const long long src = buf.sample_rate_hz;
    const long long dst = target_hz;
    const long long g = std::gcd(src, dst);
    const long long up = dst / g;   // L
    const long long down = src / g; // M

    if (up == 1) {
        // integer decimation: anti-alias at the target Nyquist, then pick
        FilterSpec aa;
        aa.passband_hz = 0.40 * target_hz;
        aa.stopband_hz = 0.50 * target_hz;
        aa.stopband_atten_db = 60.0;
        const auto taps = design_lowpass_fir(aa, buf.sample_rate_hz);
        const auto filtered = convolve_centered(buf.samples, taps);
        const std::size_t out_len =
            (buf.samples.size() + static_cast<std::size_t>(down) - 1) /
            static_cast<std::size_t>(down);
        AudioBuffer out;
        out.sample_rate_hz = target_hz;
        out.samples.resize(out_len);
        for (std::size_t m = 0; m < out_len; ++m)
            out.samples[m] = filtered[m * static_cast<std::size_t>(down)];
        return out;
    }

    // polyphase rational resampling at virtual rate src*up
    const double fs_virtual = static_cast<double>(src) * static_cast<double>(up);
    const double f_nyq = 0.5 * std::min(src, dst);
    const double cutoff = 0.90 * f_nyq / fs_virtual;
    const double transition = 0.20 * f_nyq / fs_virtual;
    const auto taps = kaiser_sinc(cutoff, 63.0, transition);

    // split prototype into `up` phases; normalizing each phase to unit sum
    // pins the DC gain of every output sample to exactly 1
    const std::size_t phase_len = (taps.size() + static_cast<std::size_t>(up) - 1) /
                                  static_cast<std::size_t>(up);
    std::vector<std::vector<double>> phases(static_cast<std::size_t>(up));
    for (std::size_t p = 0; p < phases.size(); ++p) {
        phases[p].resize(phase_len, 0.0);
        for (std::size_t k = 0; k < phase_len; ++k) {
            const std::size_t idx = p + k * static_cast<std::size_t>(up);
            if (idx < taps.size()) phases[p][k] = taps[idx];
        }
        const double s = std::accumulate(phases[p].begin(), phases[p].end(), 0.0);
        if (s != 0.0)
            for (double& h : phases[p]) h /= s;
    }

    const std::size_t in_len = buf.samples.size();
    const std::size_t out_len = static_cast<std::size_t>(
        (static_cast<unsigned long long>(in_len) * static_cast<unsigned long long>(up) +
         static_cast<unsigned long long>(down) - 1) /
        static_cast<unsigned long long>(down));
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(phase_len) / 2;

    AudioBuffer out;
    out.sample_rate_hz = target_hz;
    out.samples.resize(out_len);
    for (std::size_t m = 0; m < out_len; ++m) {
        const unsigned long long vpos = static_cast<unsigned long long>(m) *
                                        static_cast<unsigned long long>(down);
        const std::size_t n0 = static_cast<std::size_t>(vpos / static_cast<unsigned long long>(up));
        const std::size_t phase = static_cast<std::size_t>(
            vpos % static_cast<unsigned long long>(up));
        const auto& h = phases[phase];
        double acc = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
            const std::ptrdiff_t j =
                static_cast<std::ptrdiff_t>(n0) + half - static_cast<std::ptrdiff_t>(k);
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(in_len))
                acc += h[k] * buf.samples[static_cast<std::size_t>(j)];
        }
        out.samples[m] = acc;
    }
    return out;
}

std::vector<AudioWindow> window_stream(const AudioBuffer& buf, double window_s, double hop_s) {
    if (!(hop_s > 0.0) || window_s < hop_s)
        throw ParameterError("require window_s >= hop_s > 0");
    const auto rate = buf.sample_rate_hz;
    const auto win_len = static_cast<std::size_t>(std::llround(window_s * rate));
    std::vector<AudioWindow> out;
    for (std::size_t k = 0;; ++k) {
        const auto start = static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * hop_s * rate));
        if (start + win_len > buf.samples.size()) break;
        AudioWindow w;
        w.sample_rate_hz = rate;
        w.duration_s = window_s;
        w.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(start),
                         buf.samples.begin() + static_cast<std::ptrdiff_t>(start + win_len));
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace footfall
