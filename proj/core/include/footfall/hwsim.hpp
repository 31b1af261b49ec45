#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "footfall/mlp.hpp"
#include "footfall/robustness.hpp"
#include "footfall/snn.hpp"
#include "footfall/tespar.hpp"

namespace footfall {

/// 11-bit maximal-length Fibonacci LFSR, default taps (11,9). The all-zero
/// state is the lock-up state and is rejected.
class Lfsr11 {
public:
    static constexpr std::uint16_t kMask = 0x7FF;
    static constexpr std::uint16_t kPeriod = 2047;

    explicit Lfsr11(std::uint16_t seed, int tap_a = 11, int tap_b = 9);

    std::uint16_t state() const { return state_; }

    /// One shift; returns the new state.
    std::uint16_t next();

private:
    std::uint16_t state_;
    int tap_a_;
    int tap_b_;
};

/// Fixed-width spike vector, one bit per lane. Lane 0 is the most
/// significant position, matching the priority-encoder scan order.
class SpikeWord {
public:
    explicit SpikeWord(int width);
    static SpikeWord from_bools(const std::vector<std::uint8_t>& lanes);

    int width() const { return width_; }
    bool get(int lane) const;
    void set(int lane, bool value);
    int popcount() const;
    bool any() const;
    std::vector<std::uint8_t> to_bools() const;
    std::string to_hex() const; // MSB-first, width rounded up to a nibble

    /// Index of the highest-priority (lowest-index) set lane.
    std::optional<int> first_set() const;

private:
    int width_;
    std::vector<std::uint64_t> blocks_; // lane L -> block L/64, bit 63-(L%64)
};

/// Serializes the set bits of a spike word into synapse addresses: emit the
/// highest-priority set lane, clear it, repeat; exhausted means invalid.
class LzcAddressGenerator {
public:
    explicit LzcAddressGenerator(SpikeWord word) : word_(std::move(word)) {}

    /// nullopt once all spikes have been consumed (the invalid marker).
    std::optional<int> next();

private:
    SpikeWord word_;
};

/// All addresses in scan order.
std::vector<int> lzc_scan(const SpikeWord& word);

/// Per-lane LFSR spike source. Each feature is compared against its own
/// generator every step; all generators advance once per step.
class SpikeGeneratorBank {
public:
    /// Derives distinct nonzero lane seeds from the master seed.
    SpikeGeneratorBank(int lanes, std::uint64_t seed);

    /// Explicit per-lane seeds; duplicates are accepted but flagged.
    explicit SpikeGeneratorBank(const std::vector<std::uint16_t>& seeds);

    /// Compare-and-shift for one step. q holds 11-bit quantized features.
    /// Default comparison treats the LFSR state as a draw from [0, 2046]
    /// (spike iff q > state-1); strict mode compares q > state directly.
    SpikeWord encode(const std::vector<std::uint16_t>& q, bool strict_compare = false);

    bool correlated_lanes() const { return correlated_; }
    int lanes() const { return static_cast<int>(lfsrs_.size()); }
    const Lfsr11& lfsr(int lane) const { return lfsrs_[static_cast<std::size_t>(lane)]; }

private:
    std::vector<Lfsr11> lfsrs_;
    bool correlated_ = false;
};

/// Max-normalize and quantize a feature vector onto the 11-bit comparison
/// scale: q = round(fv_norm * 2047).
std::vector<std::uint16_t> quantize_fv_11bit(const FeatureVector& fv);
std::vector<std::uint16_t> quantize_fv_11bit(const std::vector<double>& fv);

/// Weight ROM for one layer: one address per presynaptic neuron holding all
/// of its fan-out weight codes.
struct WeightRom {
    int n_pre = 0;
    int n_post = 0;
    FixedPointFormat fmt;
    std::vector<std::int16_t> codes; // row-major [pre][post]

    std::int16_t code(int pre, int post) const {
        return codes[static_cast<std::size_t>(pre) * static_cast<std::size_t>(n_post) +
                     static_cast<std::size_t>(post)];
    }
};

/// Extracts a layer's codes from a quantized model.
WeightRom build_weight_rom(const MlpModel& model, int layer);

/// Hex image, one line per address, weights packed MSB-first starting with
/// postsynaptic neuron 0 in the top bits.
std::vector<std::string> dump_rom_image(const WeightRom& rom);
WeightRom parse_rom_image(const std::vector<std::string>& lines, int n_pre, int n_post,
                          const FixedPointFormat& fmt);

/// Integrate-and-fire neuron in fixed point: 16-bit saturating accumulator
/// of weight codes, strict-greater threshold, reset to zero.
struct FixedIfNeuron {
    std::int32_t acc = 0;
    bool spiked = false;

    static constexpr std::int32_t kAccMax = 32767;
    static constexpr std::int32_t kAccMin = -32768;
};

struct HwConfig {
    int n_steps = 100;
    double v_t = 1.0; // converted to a code with the ROM's fractional scale
    std::uint64_t seed = 0;
    bool strict_compare = false;
};

/// Applies one step's spike addresses to a neuron array: every listed
/// presynaptic address contributes its weight code to every neuron, with
/// saturation; then threshold, spike and reset. Returns the output word.
/// Out-of-range addresses fault. sat_events counts clamped additions.
SpikeWord fixed_if_layer_step(std::vector<FixedIfNeuron>& neurons,
                              const std::vector<int>& addresses, const WeightRom& rom,
                              std::int32_t threshold_code, std::uint64_t* sat_events = nullptr);

struct HwRunResult {
    SnnRunStats stats;
    std::uint64_t saturation_events = 0;
    bool correlated_lanes = false;
    std::vector<std::string> trace; // per-step input/hidden/output words as hex
};

/// Full digital inference path: LFSR encode -> LZC scan -> fixed-point IF
/// layers, one pass per time step. The model must be pre-quantized.
HwRunResult hw_infer(const FeatureVector& fv, const MlpModel& quantized_model,
                     const HwConfig& cfg, bool keep_trace = false);
HwRunResult hw_infer(const std::vector<double>& fv, const MlpModel& quantized_model,
                     const HwConfig& cfg, bool keep_trace = false);

/// Same pipeline with injected input spike words (bypasses the LFSR bank).
HwRunResult hw_infer_injected(const std::vector<std::vector<std::uint8_t>>& input_spikes,
                              const MlpModel& quantized_model, const HwConfig& cfg,
                              bool keep_trace = false);

/// 13-bit saturating occurrence counters, one per (D,S) bin.
class SliceRegisterFile {
public:
    static constexpr std::uint16_t kCounterMax = 8191;

    SliceRegisterFile(int d_max, int s_max);

    /// Increments the addressed counter, saturating at the 13-bit ceiling.
    void update(int d_bin, int s_bin);

    std::uint16_t count(int d_bin, int s_bin) const;
    void clear();
    int d_max() const { return d_max_; }
    int s_max() const { return s_max_; }

private:
    int d_max_;
    int s_max_;
    std::vector<std::uint16_t> counters_;
};

} // namespace footfall
