#pragma once

#include <vector>

#include "footfall/audio.hpp"

namespace footfall {

/// Kaiser-windowed sinc low-pass. Cutoff sits mid-transition; order comes
/// from the attenuation/transition-width estimate, forced odd so the group
/// delay is an integer number of samples. Taps are normalized to unit DC gain.
std::vector<double> design_lowpass_fir(const FilterSpec& spec, int sample_rate_hz);

/// Magnitude response of an FIR at one frequency (direct evaluation).
double fir_response_at(const std::vector<double>& taps, double freq_hz, int sample_rate_hz);

/// Applies a linear-phase FIR with group-delay compensation: output has the
/// same length as the input, edges zero-padded.
AudioBuffer lowpass(const AudioBuffer& buf, const FilterSpec& spec);

/// Rate conversion. Integer ratios decimate (anti-alias filter then pick);
/// non-integer ratios go through polyphase rational resampling. Identity
/// when the target equals the source rate.
AudioBuffer resample(const AudioBuffer& buf, int target_hz);

/// Cuts fixed-length windows at a fixed hop; window k starts at
/// round(k*hop_s*rate). A trailing partial window is discarded.
std::vector<AudioWindow> window_stream(const AudioBuffer& buf, double window_s, double hop_s);

} // namespace footfall
