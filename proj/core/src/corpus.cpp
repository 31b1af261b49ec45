#include "footfall/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "footfall/rng.hpp"

namespace footfall {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_count(double duration_s, int fs) {
    return static_cast<std::size_t>(std::llround(duration_s * fs));
}

double peak(const std::vector<double>& x) {
    double p = 0.0;
    for (double v : x) p = std::max(p, std::abs(v));
    return p;
}

void peak_normalize(std::vector<double>& x, double target) {
    const double p = peak(x);
    if (p > 0.0)
        for (double& v : x) v *= target / p;
}

// amplitude-modulated tone bursts near 4-5 kHz
void gen_crickets(std::vector<double>& x, int fs, RandomStream& rng) {
    const double carrier = std::min(rng.uniform(4000.0, 4900.0), 0.45 * fs);
    const double am_hz = rng.uniform(25.0, 45.0);
    const double n = static_cast<double>(x.size());
    double t_burst = 0.0;
    bool in_burst = true;
    double burst_len = rng.uniform(0.25, 0.6);
    double gap_len = rng.uniform(0.15, 0.5);
    double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = 1.0 / fs;
        t_burst += dt;
        if (in_burst && t_burst > burst_len) {
            in_burst = false;
            t_burst = 0.0;
            gap_len = rng.uniform(0.15, 0.5);
        } else if (!in_burst && t_burst > gap_len) {
            in_burst = true;
            t_burst = 0.0;
            burst_len = rng.uniform(0.25, 0.6);
        }
        phase += kTwoPi * carrier * dt;
        const double t = static_cast<double>(i) / fs;
        const double am = 0.5 * (1.0 - std::cos(kTwoPi * am_hz * t));
        const double env = in_burst ? am * am : 0.0;
        x[i] = 0.7 * env * std::sin(phase) + 0.004 * rng.gaussian();
    }
}

// repeated frequency sweeps (chirps) in the 1.5-4.5 kHz band
void gen_birds(std::vector<double>& x, int fs, RandomStream& rng) {
    const double dt = 1.0 / fs;
    std::size_t i = 0;
    while (i < x.size()) {
        const std::size_t gap = sample_count(rng.uniform(0.08, 0.4), fs);
        for (std::size_t k = 0; k < gap && i < x.size(); ++k, ++i)
            x[i] = 0.003 * rng.gaussian();
        if (i >= x.size()) break;
        const std::size_t chirp = std::max<std::size_t>(sample_count(rng.uniform(0.04, 0.15), fs), 8);
        double f0 = std::min(rng.uniform(1500.0, 4200.0), 0.40 * fs);
        double f1 = std::min(std::max(f0 + rng.uniform(-1500.0, 1500.0), 1200.0), 0.45 * fs);
        double phase = rng.uniform(0.0, kTwoPi);
        for (std::size_t k = 0; k < chirp && i < x.size(); ++k, ++i) {
            const double u = static_cast<double>(k) / static_cast<double>(chirp);
            const double f = f0 + (f1 - f0) * u;
            phase += kTwoPi * f * dt;
            const double env = std::sin(std::numbers::pi * u); // half-sine
            x[i] = 0.6 * env * std::sin(phase) + 0.003 * rng.gaussian();
        }
    }
}

// dense short broadband droplets over a hiss floor
void gen_rain(std::vector<double>& x, int fs, RandomStream& rng) {
    for (double& v : x) v = 0.02 * rng.gaussian();
    const double rate = rng.uniform(120.0, 250.0); // droplets per second
    const double duration = static_cast<double>(x.size()) / fs;
    const auto n_drops = static_cast<std::size_t>(rate * duration);
    for (std::size_t d = 0; d < n_drops; ++d) {
        const std::size_t start = rng.uniform_index(x.size());
        const double amp = rng.uniform(0.05, 0.5);
        const double tau = rng.uniform(0.0015, 0.006);
        const auto len = sample_count(5.0 * tau, fs);
        for (std::size_t k = 0; k < len && start + k < x.size(); ++k) {
            const double t = static_cast<double>(k) / fs;
            x[start + k] += amp * std::exp(-t / tau) * rng.gaussian();
        }
    }
}

// rumble-band noise (difference of two one-pole lowpasses) with slow gusts;
// the band floor stays above the footstep thump band so the saturated-D
// bins remain step-specific
void gen_wind(std::vector<double>& x, int fs, RandomStream& rng) {
    const double fc_hi = rng.uniform(600.0, 1000.0);
    const double fc_lo = rng.uniform(150.0, 300.0);
    const double a_hi = 1.0 - std::exp(-kTwoPi * fc_hi / fs);
    const double a_lo = 1.0 - std::exp(-kTwoPi * fc_lo / fs);
    const double gust_hz = rng.uniform(0.05, 0.3);
    const double gust_phase = rng.uniform(0.0, kTwoPi);
    double y_hi = 0.0, y_lo = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double white = rng.gaussian();
        y_hi += a_hi * (white - y_hi);
        y_lo += a_lo * (white - y_lo);
        const double t = static_cast<double>(i) / fs;
        const double gust = 0.6 + 0.4 * std::sin(kTwoPi * gust_hz * t + gust_phase);
        x[i] = 5.0 * gust * (y_hi - y_lo);
    }
}

} // namespace

const char* to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::Crickets: return "crickets";
    case NoiseKind::Birds: return "birds";
    case NoiseKind::Rain: return "rain";
    case NoiseKind::Wind: return "wind";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "crickets") return NoiseKind::Crickets;
    if (name == "birds") return NoiseKind::Birds;
    if (name == "rain") return NoiseKind::Rain;
    if (name == "wind") return NoiseKind::Wind;
    throw ParameterError("unknown noise kind: " + name);
}

AudioBuffer synth_background(NoiseKind kind, double duration_s, std::uint64_t seed,
                             int sample_rate_hz) {
    if (!(duration_s > 0.0)) throw ParameterError("duration must be positive");
    AudioBuffer buf;
    buf.sample_rate_hz = sample_rate_hz;
    buf.samples.assign(sample_count(duration_s, sample_rate_hz), 0.0);
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(kind) + 101));
    switch (kind) {
    case NoiseKind::Crickets: gen_crickets(buf.samples, sample_rate_hz, rng); break;
    case NoiseKind::Birds: gen_birds(buf.samples, sample_rate_hz, rng); break;
    case NoiseKind::Rain: gen_rain(buf.samples, sample_rate_hz, rng); break;
    case NoiseKind::Wind: gen_wind(buf.samples, sample_rate_hz, rng); break;
    default: throw ParameterError("unknown noise kind");
    }
    peak_normalize(buf.samples, 0.8);
    return buf;
}

AudioBuffer synth_footsteps(int walkers, double duration_s, std::uint64_t seed,
                            int sample_rate_hz, const FootstepParams& params) {
    if (walkers < 1 || walkers > 3) throw ParameterError("walkers must be in [1,3]");
    if (!(duration_s > 0.0)) throw ParameterError("duration must be positive");

    const int fs = sample_rate_hz;
    std::vector<double> sum(sample_count(duration_s, fs), 0.0);
    RandomStream scale_rng(derive_seed(seed, 7));

    for (int w = 0; w < walkers; ++w) {
        RandomStream rng(derive_seed(seed, 11, static_cast<std::uint64_t>(w)));
        const double walker_scale = scale_rng.uniform01();
        const double rate = rng.uniform(params.step_rate_min_hz, params.step_rate_max_hz);
        double t_step = rng.uniform(0.0, 1.0 / rate);
        while (t_step < duration_s) {
            const double thump_f = rng.uniform(params.thump_freq_min_hz, params.thump_freq_max_hz);
            const double thump_tau = rng.uniform(0.05, 0.1);
            const double thump_amp = rng.uniform(0.6, 0.9);
            const double crunch_tau = rng.uniform(0.008, 0.025);
            const double crunch_amp = rng.uniform(0.4, 0.8);
            const double crunch_delay = rng.uniform(0.0, 0.01);
            const double phase0 = rng.uniform(0.0, kTwoPi);

            const std::size_t start = sample_count(t_step, fs);
            const auto thump_len = sample_count(6.0 * thump_tau, fs);
            for (std::size_t k = 0; k < thump_len && start + k < sum.size(); ++k) {
                const double t = static_cast<double>(k) / fs;
                sum[start + k] += walker_scale * thump_amp * std::exp(-t / thump_tau) *
                                  std::sin(kTwoPi * thump_f * t + phase0);
            }
            const std::size_t cstart = start + sample_count(crunch_delay, fs);
            const auto crunch_len = sample_count(5.0 * crunch_tau, fs);
            for (std::size_t k = 0; k < crunch_len && cstart + k < sum.size(); ++k) {
                const double t = static_cast<double>(k) / fs;
                sum[cstart + k] += walker_scale * crunch_amp * std::exp(-t / crunch_tau) *
                                   rng.gaussian();
            }
            t_step += 1.0 / rate + rng.gaussian(0.0, 0.02);
        }
    }
    peak_normalize(sum, 0.8);
    return AudioBuffer{std::move(sum), fs};
}

AudioBuffer mix(const std::vector<AudioBuffer>& parts, const std::vector<double>& scales) {
    if (parts.empty() || parts.size() != scales.size())
        throw ParameterError("mix requires matching parts and scales");
    const std::size_t len = parts.front().samples.size();
    const int rate = parts.front().sample_rate_hz;
    for (const auto& p : parts)
        if (p.samples.size() != len || p.sample_rate_hz != rate)
            throw ParameterError("mix requires equal lengths and rates");
    for (double s : scales)
        if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("mix scales must lie in [0,1]");

    AudioBuffer out;
    out.sample_rate_hz = rate;
    out.samples.assign(len, 0.0);
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (std::size_t i = 0; i < len; ++i) out.samples[i] += scales[p] * parts[p].samples[i];
    for (double& v : out.samples) v = std::clamp(v, -1.0, 1.0);
    return out;
}

AudioBuffer augment_roll(const AudioBuffer& buf, std::size_t offset) {
    const std::size_t len = buf.samples.size();
    if (len == 0) return buf;
    const std::size_t off = offset % len;
    AudioBuffer out;
    out.sample_rate_hz = buf.sample_rate_hz;
    out.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) out.samples[i] = buf.samples[(i + len - off) % len];
    return out;
}

AudioBuffer augment_noise(const AudioBuffer& buf, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return buf;
    double sig_power = 0.0;
    for (double v : buf.samples) sig_power += v * v;
    if (sig_power == 0.0) throw ParameterError("zero-RMS input with finite SNR");

    RandomStream rng(derive_seed(seed, 13));
    std::vector<double> noise(buf.samples.size());
    double noise_power = 0.0;
    for (double& v : noise) {
        v = rng.gaussian();
        noise_power += v * v;
    }
    // scale so the realized (not just expected) SNR matches exactly
    const double target_noise_power = sig_power / std::pow(10.0, snr_db / 10.0);
    const double scale = std::sqrt(target_noise_power / noise_power);

    AudioBuffer out;
    out.sample_rate_hz = buf.sample_rate_hz;
    out.samples.resize(buf.samples.size());
    for (std::size_t i = 0; i < noise.size(); ++i)
        out.samples[i] = buf.samples[i] + scale * noise[i];
    return out;
}

std::array<std::size_t, 3> largest_remainder_split(std::size_t total, const SplitWeights& w) {
    const std::uint64_t weights[3] = {w.train, w.validation, w.test};
    const std::uint64_t wsum = weights[0] + weights[1] + weights[2];
    if (wsum == 0) throw ParameterError("split weights sum to zero");

    std::array<std::size_t, 3> sizes{};
    std::uint64_t rem_num[3];
    std::size_t assigned = 0;
    for (int j = 0; j < 3; ++j) {
        const std::uint64_t num = static_cast<std::uint64_t>(total) * weights[j];
        sizes[static_cast<std::size_t>(j)] = static_cast<std::size_t>(num / wsum);
        rem_num[j] = num % wsum;
        assigned += sizes[static_cast<std::size_t>(j)];
    }
    std::size_t seats = total - assigned;
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (rem_num[a] != rem_num[b]) return rem_num[a] > rem_num[b];
        return a > b; // tie goes to the later split
    });
    for (std::size_t k = 0; k < seats; ++k) ++sizes[static_cast<std::size_t>(order[k % 3])];
    return sizes;
}

DatasetSplit build_dataset(const SynthSpec& spec) {
    if (spec.per_class == 0) throw ParameterError("per_class must be > 0");
    if (spec.kinds.empty()) throw ParameterError("at least one noise kind required");
    if (spec.min_walkers < 1 || spec.max_walkers > 3 || spec.min_walkers > spec.max_walkers)
        throw ParameterError("walker range must lie within [1,3]");
    if (!(spec.step_rate_min_hz < spec.step_rate_max_hz) || !(spec.snr_min_db < spec.snr_max_db))
        throw ParameterError("degenerate parameter range");

    const std::size_t total = 2 * spec.per_class;
    const auto sizes = largest_remainder_split(total, SplitWeights{});

    // class-0 seats per split: floor(size/2), leftovers to the earliest
    // odd-sized splits, so each split is balanced within one sample
    std::array<std::size_t, 3> c0{};
    std::size_t c0_assigned = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        c0[j] = sizes[j] / 2;
        c0_assigned += c0[j];
    }
    for (std::size_t j = 0; j < 3 && c0_assigned < spec.per_class; ++j) {
        if (sizes[j] % 2 == 1) {
            ++c0[j];
            ++c0_assigned;
        }
    }

    const FootstepParams fsteps{spec.step_rate_min_hz, spec.step_rate_max_hz, 60.0, 300.0};
    const int n_kinds = static_cast<int>(spec.kinds.size());
    const int n_walker_opts = spec.max_walkers - spec.min_walkers + 1;

    const auto make_sample = [&](int label, std::size_t class_idx,
                                 std::uint64_t id) -> LabeledWindow {
        const std::uint64_t sseed = derive_seed(spec.seed, id);
        RandomStream rng(derive_seed(sseed, 1));
        const NoiseKind kind = spec.kinds[class_idx % static_cast<std::size_t>(n_kinds)];
        AudioBuffer bg = synth_background(kind, spec.window_s, derive_seed(sseed, 2),
                                          spec.sample_rate_hz);
        int walkers = 0;
        AudioBuffer sig;
        if (label == 1) {
            walkers = spec.min_walkers +
                      static_cast<int>((class_idx / static_cast<std::size_t>(n_kinds)) %
                                       static_cast<std::size_t>(n_walker_opts));
            AudioBuffer steps = synth_footsteps(walkers, spec.window_s, derive_seed(sseed, 3),
                                                spec.sample_rate_hz, fsteps);
            const double bg_scale = rng.uniform(0.1, 0.55);
            const double fs_scale = rng.uniform(0.55, 1.0);
            sig = mix({bg, steps}, {bg_scale, fs_scale});
        } else {
            sig = std::move(bg);
        }
        sig = augment_roll(sig, rng.uniform_index(sig.samples.size()));
        sig = augment_noise(sig, rng.uniform(spec.snr_min_db, spec.snr_max_db),
                            derive_seed(sseed, 4));

        LabeledWindow lw;
        lw.window = AudioWindow{std::move(sig.samples), spec.sample_rate_hz, spec.window_s};
        lw.label = label;
        lw.meta = LabeledWindow::Meta{kind, walkers, sseed, id};
        return lw;
    };

    DatasetSplit ds;
    ds.allocation = SplitAllocation{sizes, c0};
    std::vector<LabeledWindow>* outs[3] = {&ds.train, &ds.validation, &ds.test};

    std::uint64_t id = 0;
    for (int label : {0, 1}) {
        std::size_t class_idx = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t want = (label == 0) ? c0[j] : sizes[j] - c0[j];
            for (std::size_t k = 0; k < want; ++k, ++class_idx, ++id)
                outs[j]->push_back(make_sample(label, class_idx, id));
        }
    }
    return ds;
}

std::vector<std::pair<std::string, int>> load_manifest(const std::string& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw IoError("cannot open manifest " + manifest_path);
    const auto base = std::filesystem::path(manifest_path).parent_path();

    std::vector<std::pair<std::string, int>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find_last_of(',');
        if (comma == std::string::npos)
            throw FormatError("manifest line " + std::to_string(lineno) + ": expected path,label");
        const std::string path = line.substr(0, comma);
        const std::string label_str = line.substr(comma + 1);
        if (path == "path" && label_str == "label") continue; // header
        int label = 0;
        try {
            label = std::stoi(label_str);
        } catch (const std::exception&) {
            throw FormatError("manifest line " + std::to_string(lineno) + ": bad label");
        }
        if (label != 0 && label != 1)
            throw FormatError("manifest line " + std::to_string(lineno) + ": label must be 0 or 1");
        std::filesystem::path p(path);
        if (p.is_relative()) p = base / p;
        entries.emplace_back(p.string(), label);
    }
    return entries;
}

} // namespace footfall
