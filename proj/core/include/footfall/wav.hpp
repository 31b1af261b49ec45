#pragma once

#include <string>

#include "footfall/audio.hpp"

namespace footfall {

/// Reads a PCM RIFF/WAVE file (8/16/24-bit, mono or stereo).
/// Stereo is downmixed by channel mean; integer samples are scaled by the
/// full-scale magnitude of the format (e.g. 16-bit => x/32768).
AudioBuffer load_wav(const std::string& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1].
void save_wav(const std::string& path, const AudioBuffer& buf);

} // namespace footfall
