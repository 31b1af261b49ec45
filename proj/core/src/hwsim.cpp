#include "footfall/hwsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "footfall/rng.hpp"

namespace footfall {

Lfsr11::Lfsr11(std::uint16_t seed, int tap_a, int tap_b) : state_(seed), tap_a_(tap_a), tap_b_(tap_b) {
    if (seed == 0 || seed > kMask) throw ParameterError("LFSR seed must lie in [1, 2047]");
    if (tap_a_ != 11 || tap_b_ < 1 || tap_b_ >= 11)
        throw ParameterError("taps must be (11, k) with 1 <= k < 11");
}

std::uint16_t Lfsr11::next() {
    if (state_ == 0) throw ParameterError("LFSR in lock-up state");
    const std::uint16_t fb = ((state_ >> 10) ^ (state_ >> (tap_b_ - 1))) & 1u;
    state_ = static_cast<std::uint16_t>(((state_ << 1) | fb) & kMask);
    return state_;
}

SpikeWord::SpikeWord(int width) : width_(width) {
    if (width < 1) throw ParameterError("spike word width must be >= 1");
    blocks_.assign(static_cast<std::size_t>((width + 63) / 64), 0);
}

SpikeWord SpikeWord::from_bools(const std::vector<std::uint8_t>& lanes) {
    SpikeWord w(static_cast<int>(lanes.size()));
    for (std::size_t i = 0; i < lanes.size(); ++i)
        if (lanes[i]) w.set(static_cast<int>(i), true);
    return w;
}

bool SpikeWord::get(int lane) const {
    if (lane < 0 || lane >= width_) throw ParameterError("lane out of range");
    return (blocks_[static_cast<std::size_t>(lane / 64)] >>
            (63 - (lane % 64))) & 1u;
}

void SpikeWord::set(int lane, bool value) {
    if (lane < 0 || lane >= width_) throw ParameterError("lane out of range");
    const std::uint64_t bit = std::uint64_t{1} << (63 - (lane % 64));
    auto& blk = blocks_[static_cast<std::size_t>(lane / 64)];
    if (value)
        blk |= bit;
    else
        blk &= ~bit;
}

int SpikeWord::popcount() const {
    int c = 0;
    for (auto b : blocks_) c += std::popcount(b);
    return c;
}

bool SpikeWord::any() const {
    for (auto b : blocks_)
        if (b) return true;
    return false;
}

std::vector<std::uint8_t> SpikeWord::to_bools() const {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width_), 0);
    for (int i = 0; i < width_; ++i) out[static_cast<std::size_t>(i)] = get(i) ? 1 : 0;
    return out;
}

std::string SpikeWord::to_hex() const {
    static const char* digits = "0123456789abcdef";
    const int nibbles = (width_ + 3) / 4;
    std::string s;
    s.reserve(static_cast<std::size_t>(nibbles));
    for (int n = 0; n < nibbles; ++n) {
        int v = 0;
        for (int k = 0; k < 4; ++k) {
            const int lane = n * 4 + k;
            v = (v << 1) | ((lane < width_ && get(lane)) ? 1 : 0);
        }
        s.push_back(digits[v]);
    }
    return s;
}

std::optional<int> SpikeWord::first_set() const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b] != 0) {
            const int lane = static_cast<int>(b) * 64 + std::countl_zero(blocks_[b]);
            return lane < width_ ? std::optional<int>(lane) : std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<int> LzcAddressGenerator::next() {
    const auto lane = word_.first_set();
    if (lane) word_.set(*lane, false); // highest bit reset
    return lane;
}

std::vector<int> lzc_scan(const SpikeWord& word) {
    std::vector<int> addresses;
    LzcAddressGenerator gen(word);
    while (auto a = gen.next()) addresses.push_back(*a);
    return addresses;
}

SpikeGeneratorBank::SpikeGeneratorBank(int lanes, std::uint64_t seed) {
    if (lanes < 1) throw ParameterError("need at least one lane");
    // affine stride over [1, 2047]; the stride is kept coprime to
    // 2047 = 23 * 89 so lane seeds are pairwise distinct
    const std::uint64_t h = derive_seed(seed, 0x1F5A);
    const std::uint16_t base = static_cast<std::uint16_t>(h % Lfsr11::kPeriod);
    std::uint16_t stride = static_cast<std::uint16_t>(1 + (h >> 32) % (Lfsr11::kPeriod - 1));
    while (stride % 23 == 0 || stride % 89 == 0) ++stride;
    lfsrs_.reserve(static_cast<std::size_t>(lanes));
    for (int i = 0; i < lanes; ++i) {
        const std::uint16_t s = static_cast<std::uint16_t>(
            (base + static_cast<std::uint32_t>(i) * stride) % Lfsr11::kPeriod + 1);
        lfsrs_.emplace_back(s);
    }
}

SpikeGeneratorBank::SpikeGeneratorBank(const std::vector<std::uint16_t>& seeds) {
    if (seeds.empty()) throw ParameterError("need at least one lane");
    std::set<std::uint16_t> unique(seeds.begin(), seeds.end());
    correlated_ = unique.size() != seeds.size();
    lfsrs_.reserve(seeds.size());
    for (auto s : seeds) lfsrs_.emplace_back(s);
}

SpikeWord SpikeGeneratorBank::encode(const std::vector<std::uint16_t>& q, bool strict_compare) {
    if (q.size() != lfsrs_.size()) throw ParameterError("feature width != lane count");
    SpikeWord word(static_cast<int>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) {
        const std::uint16_t state = lfsrs_[i].state();
        const bool spike = strict_compare ? (q[i] > state)
                                          : (q[i] > static_cast<std::uint16_t>(state - 1));
        if (spike) word.set(static_cast<int>(i), true);
        lfsrs_[i].next();
    }
    return word;
}

std::vector<std::uint16_t> quantize_fv_11bit(const std::vector<double>& fv) {
    double m = 0.0;
    for (double v : fv) m = std::max(m, v);
    std::vector<std::uint16_t> q(fv.size(), 0);
    if (m > 0.0)
        for (std::size_t i = 0; i < fv.size(); ++i)
            q[i] = static_cast<std::uint16_t>(
                std::lrint(std::clamp(fv[i] / m, 0.0, 1.0) * Lfsr11::kPeriod));
    return q;
}

std::vector<std::uint16_t> quantize_fv_11bit(const FeatureVector& fv) {
    std::vector<double> reals(fv.values.begin(), fv.values.end());
    return quantize_fv_11bit(reals);
}

WeightRom build_weight_rom(const MlpModel& model, int layer) {
    if (!model.quantization.applied)
        throw ParameterError("weight ROM requires a quantized model");
    if (layer < 0 || layer >= model.n_layers()) throw ParameterError("layer out of range");
    FixedPointFormat fmt{model.quantization.int_bits, model.quantization.frac_bits};

    WeightRom rom;
    rom.n_pre = model.dims[static_cast<std::size_t>(layer)];
    rom.n_post = model.dims[static_cast<std::size_t>(layer) + 1];
    rom.fmt = fmt;
    rom.codes.resize(static_cast<std::size_t>(rom.n_pre) * static_cast<std::size_t>(rom.n_post));
    for (int i = 0; i < rom.n_pre; ++i)
        for (int j = 0; j < rom.n_post; ++j)
            rom.codes[static_cast<std::size_t>(i) * static_cast<std::size_t>(rom.n_post) +
                      static_cast<std::size_t>(j)] =
                static_cast<std::int16_t>(quantize(model.w(layer, i, j), fmt).code);
    return rom;
}

std::vector<std::string> dump_rom_image(const WeightRom& rom) {
    static const char* digits = "0123456789abcdef";
    const int bits_per_w = rom.fmt.total_bits();
    std::vector<std::string> lines;
    lines.reserve(static_cast<std::size_t>(rom.n_pre));
    for (int i = 0; i < rom.n_pre; ++i) {
        std::vector<bool> bits;
        bits.reserve(static_cast<std::size_t>(rom.n_post * bits_per_w));
        for (int j = 0; j < rom.n_post; ++j) {
            const std::uint32_t u = static_cast<std::uint32_t>(rom.code(i, j)) &
                                    ((1u << bits_per_w) - 1u); // two's complement, low bits
            for (int b = bits_per_w - 1; b >= 0; --b) bits.push_back((u >> b) & 1u);
        }
        while (bits.size() % 4 != 0) bits.push_back(false); // pad to a nibble
        std::string line;
        for (std::size_t n = 0; n < bits.size(); n += 4) {
            int v = 0;
            for (int k = 0; k < 4; ++k) v = (v << 1) | (bits[n + static_cast<std::size_t>(k)] ? 1 : 0);
            line.push_back(digits[v]);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

WeightRom parse_rom_image(const std::vector<std::string>& lines, int n_pre, int n_post,
                          const FixedPointFormat& fmt) {
    if (static_cast<int>(lines.size()) != n_pre)
        throw FormatError("ROM image has wrong address count");
    const int bits_per_w = fmt.total_bits();
    WeightRom rom;
    rom.n_pre = n_pre;
    rom.n_post = n_post;
    rom.fmt = fmt;
    rom.codes.resize(static_cast<std::size_t>(n_pre) * static_cast<std::size_t>(n_post));

    for (int i = 0; i < n_pre; ++i) {
        const auto& line = lines[static_cast<std::size_t>(i)];
        std::vector<bool> bits;
        bits.reserve(line.size() * 4);
        for (char c : line) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw FormatError("ROM image has a non-hex character");
            for (int k = 3; k >= 0; --k) bits.push_back((v >> k) & 1);
        }
        if (bits.size() < static_cast<std::size_t>(n_post * bits_per_w))
            throw FormatError("ROM image line too short");
        for (int j = 0; j < n_post; ++j) {
            std::uint32_t u = 0;
            for (int b = 0; b < bits_per_w; ++b)
                u = (u << 1) | (bits[static_cast<std::size_t>(j * bits_per_w + b)] ? 1u : 0u);
            if (u & (1u << (bits_per_w - 1))) u |= ~((1u << bits_per_w) - 1u); // sign extend
            rom.codes[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_post) +
                      static_cast<std::size_t>(j)] =
                static_cast<std::int16_t>(static_cast<std::int32_t>(u));
        }
    }
    return rom;
}

SpikeWord fixed_if_layer_step(std::vector<FixedIfNeuron>& neurons,
                              const std::vector<int>& addresses, const WeightRom& rom,
                              std::int32_t threshold_code, std::uint64_t* sat_events) {
    if (static_cast<int>(neurons.size()) != rom.n_post)
        throw ParameterError("neuron array width != ROM fan-out");
    for (int a : addresses) {
        if (a < 0 || a >= rom.n_pre) throw HardwareFault("spike address out of range");
        const std::int16_t* row = rom.codes.data() +
                                  static_cast<std::size_t>(a) * static_cast<std::size_t>(rom.n_post);
        for (int j = 0; j < rom.n_post; ++j) {
            auto& n = neurons[static_cast<std::size_t>(j)];
            std::int32_t sum = n.acc + row[j];
            if (sum > FixedIfNeuron::kAccMax) {
                sum = FixedIfNeuron::kAccMax;
                if (sat_events) ++*sat_events;
            } else if (sum < FixedIfNeuron::kAccMin) {
                sum = FixedIfNeuron::kAccMin;
                if (sat_events) ++*sat_events;
            }
            n.acc = sum;
        }
    }
    SpikeWord out(rom.n_post);
    for (int j = 0; j < rom.n_post; ++j) {
        auto& n = neurons[static_cast<std::size_t>(j)];
        n.spiked = n.acc > threshold_code;
        if (n.spiked) {
            n.acc = 0;
            out.set(j, true);
        }
    }
    return out;
}

namespace {

HwRunResult hw_run(const std::vector<double>* fv,
                   const std::vector<std::vector<std::uint8_t>>* injected,
                   const MlpModel& model, const HwConfig& cfg, bool keep_trace) {
    if (!model.quantization.applied)
        throw ParameterError("hardware inference requires a quantized model");
    if (!model.zero_bias) throw ConversionError("hardware inference requires a zero-bias model");
    if (cfg.n_steps < 1) throw ParameterError("n_steps must be >= 1");

    const int n_layers = model.n_layers();
    std::vector<WeightRom> roms;
    roms.reserve(static_cast<std::size_t>(n_layers));
    for (int l = 0; l < n_layers; ++l) roms.push_back(build_weight_rom(model, l));

    const std::int32_t thr_code = static_cast<std::int32_t>(
        std::lrint(cfg.v_t * std::ldexp(1.0, roms.front().fmt.frac_bits)));

    std::vector<std::vector<FixedIfNeuron>> arrays(static_cast<std::size_t>(n_layers));
    for (int l = 0; l < n_layers; ++l)
        arrays[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(model.dims[static_cast<std::size_t>(l) + 1]),
            FixedIfNeuron{});

    HwRunResult result;
    auto& stats = result.stats;
    const int n_out = model.dims.back();
    stats.spikes_per_layer.assign(static_cast<std::size_t>(n_layers) + 1, 0);
    stats.output_counts.assign(static_cast<std::size_t>(n_out), 0);

    std::optional<SpikeGeneratorBank> bank;
    std::vector<std::uint16_t> q;
    if (!injected) {
        bank.emplace(model.dims.front(), cfg.seed);
        q = quantize_fv_11bit(*fv);
        result.correlated_lanes = bank->correlated_lanes();
    }

    for (int step = 0; step < cfg.n_steps; ++step) {
        SpikeWord word = injected
                             ? SpikeWord::from_bools((*injected)[static_cast<std::size_t>(step)])
                             : bank->encode(q, cfg.strict_compare);
        if (word.width() != model.dims.front())
            throw ParameterError("spike word width mismatch");
        stats.spikes_per_layer[0] += static_cast<std::uint64_t>(word.popcount());
        if (keep_trace) result.trace.push_back("in  " + word.to_hex());

        for (int l = 0; l < n_layers; ++l) {
            const auto addresses = lzc_scan(word);
            word = fixed_if_layer_step(arrays[static_cast<std::size_t>(l)], addresses,
                                       roms[static_cast<std::size_t>(l)], thr_code,
                                       &result.saturation_events);
            stats.spikes_per_layer[static_cast<std::size_t>(l) + 1] +=
                static_cast<std::uint64_t>(word.popcount());
            if (keep_trace)
                result.trace.push_back((l + 1 == n_layers ? "out " : "hid ") + word.to_hex());
        }

        const auto out_bools = word.to_bools();
        stats.output_step_spikes.push_back(out_bools);
        for (int j = 0; j < n_out; ++j)
            stats.output_counts[static_cast<std::size_t>(j)] += out_bools[static_cast<std::size_t>(j)];
    }

    const auto it = std::max_element(stats.output_counts.begin(), stats.output_counts.end());
    stats.predicted = static_cast<int>(it - stats.output_counts.begin());
    stats.tie = std::count(stats.output_counts.begin(), stats.output_counts.end(), *it) > 1;
    return result;
}

} // namespace

HwRunResult hw_infer(const std::vector<double>& fv, const MlpModel& quantized_model,
                     const HwConfig& cfg, bool keep_trace) {
    if (fv.size() != static_cast<std::size_t>(quantized_model.dims.front()))
        throw ParameterError("feature length does not match the input layer");
    return hw_run(&fv, nullptr, quantized_model, cfg, keep_trace);
}

HwRunResult hw_infer(const FeatureVector& fv, const MlpModel& quantized_model,
                     const HwConfig& cfg, bool keep_trace) {
    std::vector<double> reals(fv.values.begin(), fv.values.end());
    return hw_infer(reals, quantized_model, cfg, keep_trace);
}

HwRunResult hw_infer_injected(const std::vector<std::vector<std::uint8_t>>& input_spikes,
                              const MlpModel& quantized_model, const HwConfig& cfg,
                              bool keep_trace) {
    if (input_spikes.size() != static_cast<std::size_t>(cfg.n_steps))
        throw ParameterError("need one spike word per step");
    return hw_run(nullptr, &input_spikes, quantized_model, cfg, keep_trace);
}

SliceRegisterFile::SliceRegisterFile(int d_max, int s_max) : d_max_(d_max), s_max_(s_max) {
    if (d_max < 1 || s_max < 1) throw ParameterError("bin dimensions must be >= 1");
    counters_.assign(static_cast<std::size_t>(d_max) * static_cast<std::size_t>(s_max), 0);
}

void SliceRegisterFile::update(int d_bin, int s_bin) {
    if (d_bin < 0 || d_bin >= d_max_ || s_bin < 0 || s_bin >= s_max_)
        throw HardwareFault("bin address out of range");
    auto& c = counters_[static_cast<std::size_t>(d_bin) * static_cast<std::size_t>(s_max_) +
                        static_cast<std::size_t>(s_bin)];
    if (c < kCounterMax) ++c;
}

std::uint16_t SliceRegisterFile::count(int d_bin, int s_bin) const {
    if (d_bin < 0 || d_bin >= d_max_ || s_bin < 0 || s_bin >= s_max_)
        throw HardwareFault("bin address out of range");
    return counters_[static_cast<std::size_t>(d_bin) * static_cast<std::size_t>(s_max_) +
                     static_cast<std::size_t>(s_bin)];
}

void SliceRegisterFile::clear() {
    std::fill(counters_.begin(), counters_.end(), 0);
}

} // namespace footfall
