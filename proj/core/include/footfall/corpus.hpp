#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "footfall/audio.hpp"

namespace footfall {

enum class NoiseKind { Crickets, Birds, Rain, Wind };

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// A window with its class label: 0 = background only, 1 = footsteps present.
struct LabeledWindow {
    AudioWindow window;
    int label = 0;
    struct Meta {
        NoiseKind kind = NoiseKind::Crickets;
        int walkers = 0; // 0 for background-only samples
        std::uint64_t seed = 0;
        std::uint64_t id = 0; // global sample index, unique across splits
    } meta;
};

/// How the total was allocated to splits and classes.
struct SplitAllocation {
    std::array<std::size_t, 3> sizes{};         // train, validation, test
    std::array<std::size_t, 3> class0_counts{}; // per split
};

struct DatasetSplit {
    std::vector<LabeledWindow> train;
    std::vector<LabeledWindow> validation;
    std::vector<LabeledWindow> test;
    SplitAllocation allocation;
};

struct SynthSpec {
    std::uint64_t seed = 0;
    std::size_t per_class = 400;
    int sample_rate_hz = 11025;
    double window_s = 5.0;
    std::vector<NoiseKind> kinds{NoiseKind::Crickets, NoiseKind::Birds, NoiseKind::Rain,
                                 NoiseKind::Wind};
    int min_walkers = 1;
    int max_walkers = 3;
    double step_rate_min_hz = 1.5;
    double step_rate_max_hz = 2.5;
    double snr_min_db = 10.0;
    double snr_max_db = 30.0;
};

/// Split proportions, expressed as the integer weights they were taken from.
struct SplitWeights {
    std::uint64_t train = 9024;
    std::uint64_t validation = 1664;
    std::uint64_t test = 1664;
};

/// Largest-remainder seat allocation of `total` over the three weights.
/// Remainder ties go to the later split.
std::array<std::size_t, 3> largest_remainder_split(std::size_t total, const SplitWeights& w);

/// Deterministic background generator; same (kind, seed, duration) gives a
/// bit-identical buffer.
AudioBuffer synth_background(NoiseKind kind, double duration_s, std::uint64_t seed,
                             int sample_rate_hz = 11025);

struct FootstepParams {
    double step_rate_min_hz = 1.5;
    double step_rate_max_hz = 2.5;
    double thump_freq_min_hz = 60.0;
    double thump_freq_max_hz = 300.0;
};

/// 1-3 walkers on gravel: per step a damped low-frequency thump plus a short
/// broadband crunch burst. Walkers are mixed with per-walker scales drawn
/// uniformly in [0,1]; the sum is then peak-normalized.
AudioBuffer synth_footsteps(int walkers, double duration_s, std::uint64_t seed,
                            int sample_rate_hz = 11025, const FootstepParams& params = {});

/// Elementwise weighted sum, clipped to [-1, 1]. Scales must lie in [0,1];
/// lengths and rates must match.
AudioBuffer mix(const std::vector<AudioBuffer>& parts, const std::vector<double>& scales);

/// Circular shift by `offset` samples (reduced mod length).
AudioBuffer augment_roll(const AudioBuffer& buf, std::size_t offset);

/// Adds white Gaussian noise scaled so the output SNR equals snr_db.
/// +inf passes the input through unchanged.
AudioBuffer augment_noise(const AudioBuffer& buf, double snr_db, std::uint64_t seed);

/// Builds the full labeled corpus: balanced classes, stratified noise kinds
/// and walker counts, paper-proportioned splits. Pure function of spec.
DatasetSplit build_dataset(const SynthSpec& spec);

/// Manifest ingestion: CSV lines `path,label`. Paths are resolved relative
/// to the manifest's directory unless absolute.
std::vector<std::pair<std::string, int>> load_manifest(const std::string& manifest_path);

} // namespace footfall
