#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "footfall/errors.hpp"

namespace footfall {

/// Mono audio at a fixed sample rate, amplitudes nominally in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Fixed-duration classification unit cut from a stream (5 s by default).
struct AudioWindow {
    std::vector<double> samples;
    int sample_rate_hz = 0;
    double duration_s = 0.0;
};

inline AudioWindow make_window(std::vector<double> samples, int rate_hz, double duration_s) {
    const auto want = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    if (samples.size() != want)
        throw ParameterError("window length does not match duration*rate");
    return AudioWindow{std::move(samples), rate_hz, duration_s};
}

/// Low-pass band edges and required stopband rejection.
struct FilterSpec {
    double passband_hz = 5000.0;
    double stopband_hz = 6000.0;
    double stopband_atten_db = 40.0;
};

inline void validate(const AudioBuffer& buf) {
    if (buf.sample_rate_hz <= 0) throw ParameterError("sample_rate_hz must be positive");
    for (double s : buf.samples)
        if (!std::isfinite(s)) throw ParameterError("non-finite sample");
}

inline void validate(const FilterSpec& spec, int sample_rate_hz) {
    if (!(spec.passband_hz > 0.0 && spec.passband_hz < spec.stopband_hz &&
          spec.stopband_hz < sample_rate_hz / 2.0))
        throw ParameterError("filter band edges must satisfy 0 < pass < stop < Nyquist");
    if (spec.stopband_atten_db < 0.0)
        throw ParameterError("stopband attenuation must be non-negative");
}

} // namespace footfall
