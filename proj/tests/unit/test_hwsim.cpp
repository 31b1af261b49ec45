#include <doctest.h>

#include <set>

#include "footfall/hwsim.hpp"
#include "footfall/rng.hpp"

using namespace footfall;

namespace {

std::vector<int> naive_scan(const std::vector<std::uint8_t>& lanes) {
    std::vector<int> out;
    for (std::size_t i = 0; i < lanes.size(); ++i)
        if (lanes[i]) out.push_back(static_cast<int>(i));
    return out;
}

} // namespace

TEST_CASE("LFSR rejects the lock-up state and stays in range") {
    CHECK_THROWS_AS(Lfsr11(0), ParameterError);
    CHECK_THROWS_AS(Lfsr11(2048), ParameterError);
    Lfsr11 r(1);
    for (int i = 0; i < 5000; ++i) {
        const auto s = r.next();
        CHECK(s >= 1);
        CHECK(s <= 2047);
    }
}

TEST_CASE("seed 0x7FF returns after exactly 2047 shifts") {
    Lfsr11 r(0x7FF);
    int period = 0;
    do {
        r.next();
        ++period;
        REQUIRE(period <= 2047);
    } while (r.state() != 0x7FF);
    CHECK(period == 2047);
}

TEST_CASE("spike word bit layout and hex dump") {
    SpikeWord w(8);
    w.set(2, true);
    w.set(5, true);
    CHECK(w.popcount() == 2);
    CHECK(w.get(2));
    CHECK_FALSE(w.get(3));
    CHECK(w.to_hex() == "24"); // 0b00100100
    CHECK_THROWS_AS(w.set(8, true), ParameterError);
}

TEST_CASE("LZC scan order matches the worked example") {
    SpikeWord w(8);
    w.set(2, true);
    w.set(5, true);
    LzcAddressGenerator gen(w);
    CHECK(gen.next() == 2);
    CHECK(gen.next() == 5);
    CHECK_FALSE(gen.next().has_value()); // invalid marker
    CHECK_FALSE(gen.next().has_value());
}

TEST_CASE("LZC on empty and single-MSB words") {
    SpikeWord zero(8);
    CHECK(lzc_scan(zero).empty());
    SpikeWord msb(8);
    msb.set(0, true); // 0b10000000
    CHECK(lzc_scan(msb) == std::vector<int>{0});
}

TEST_CASE("LZC equals the naive scan on random wide words") {
    RandomStream rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::uint8_t> lanes(50);
        for (auto& b : lanes) b = rng.uniform01() < 0.3 ? 1 : 0;
        const auto word = SpikeWord::from_bools(lanes);
        const auto got = lzc_scan(word);
        CHECK(got == naive_scan(lanes));
        CHECK(static_cast<int>(got.size()) == word.popcount());
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1] < got[i]);
    }
}

TEST_CASE("derived lane seeds are pairwise distinct") {
    for (std::uint64_t seed : {0ull, 1ull, 99ull, 0xDEADull}) {
        SpikeGeneratorBank bank(50, seed);
        CHECK_FALSE(bank.correlated_lanes());
        std::set<std::uint16_t> seen;
        for (int i = 0; i < 50; ++i) seen.insert(bank.lfsr(i).state());
        CHECK(seen.size() == 50);
    }
    SpikeGeneratorBank dup(std::vector<std::uint16_t>{5, 5, 9});
    CHECK(dup.correlated_lanes());
}

TEST_CASE("zero feature never spikes, full-scale always spikes") {
    SpikeGeneratorBank bank(2, 3);
    for (int step = 0; step < 3000; ++step) {
        const auto word = bank.encode({0, 2047});
        CHECK_FALSE(word.get(0));
        CHECK(word.get(1));
    }
}

TEST_CASE("lane spike rate over one full period is exactly q/2047") {
    for (std::uint16_t q : {1, 7, 512, 1024, 2046, 2047}) {
        SpikeGeneratorBank bank(1, derive_seed(4, q));
        int hits = 0;
        for (int step = 0; step < 2047; ++step) hits += bank.encode({q}).get(0) ? 1 : 0;
        CHECK(hits == q);
    }
}

TEST_CASE("strict comparison misses one state per period") {
    SpikeGeneratorBank bank(1, 9);
    int hits = 0;
    for (int step = 0; step < 2047; ++step) hits += bank.encode({2047}, true).get(0) ? 1 : 0;
    CHECK(hits == 2046);
}

TEST_CASE("11-bit feature quantization") {
    const std::vector<double> fv{0.0, 4.0, 2.0, 1.0};
    const auto q = quantize_fv_11bit(fv);
    CHECK(q[0] == 0);
    CHECK(q[1] == 2047);
    CHECK(q[2] == 1024); // round(0.5 * 2047)
    CHECK(q[3] == 512);
    const auto zeros = quantize_fv_11bit(std::vector<double>{0.0, 0.0});
    CHECK(zeros == std::vector<std::uint16_t>{0, 0});
}

TEST_CASE("weight ROM dump/parse round trip") {
    auto m = init_model({5, 4, 2}, 13);
    const auto q = quantize_model(m, FixedPointFormat{3, 6});
    for (int layer : {0, 1}) {
        const auto rom = build_weight_rom(q, layer);
        const auto lines = dump_rom_image(rom);
        REQUIRE(static_cast<int>(lines.size()) == rom.n_pre);
        // 4 weights x 10 bits = 40 bits = 10 hex chars on layer 0
        if (layer == 0) CHECK(lines[0].size() == 10);
        const auto back = parse_rom_image(lines, rom.n_pre, rom.n_post, rom.fmt);
        CHECK(back.codes == rom.codes);
    }
    CHECK_THROWS_AS(build_weight_rom(m, 0), ParameterError); // not quantized
}

TEST_CASE("fixed IF layer step matches the strict-threshold example") {
    // one neuron, weight code 64 (= 1.0), threshold code 64
    WeightRom rom;
    rom.n_pre = 1;
    rom.n_post = 1;
    rom.fmt = FixedPointFormat{3, 6};
    rom.codes = {64};
    std::vector<FixedIfNeuron> neurons(1);

    auto out1 = fixed_if_layer_step(neurons, {0}, rom, 64);
    CHECK_FALSE(out1.get(0)); // 64 > 64 is false
    CHECK(neurons[0].acc == 64);
    auto out2 = fixed_if_layer_step(neurons, {0}, rom, 64);
    CHECK(out2.get(0)); // 128 > 64
    CHECK(neurons[0].acc == 0);
}

TEST_CASE("no addresses means no accumulator changes and no spikes") {
    WeightRom rom;
    rom.n_pre = 2;
    rom.n_post = 3;
    rom.fmt = FixedPointFormat{3, 6};
    rom.codes = {10, 20, 30, 40, 50, 60};
    std::vector<FixedIfNeuron> neurons(3);
    neurons[1].acc = 33;
    const auto out = fixed_if_layer_step(neurons, {}, rom, 64);
    CHECK_FALSE(out.any());
    CHECK(neurons[1].acc == 33);
}

TEST_CASE("accumulator saturates instead of wrapping") {
    WeightRom rom;
    rom.n_pre = 1;
    rom.n_post = 1;
    rom.fmt = FixedPointFormat{3, 6};
    rom.codes = {511};
    std::vector<FixedIfNeuron> neurons(1);
    neurons[0].acc = FixedIfNeuron::kAccMax;
    std::uint64_t sat = 0;
    fixed_if_layer_step(neurons, {0}, rom, 1 << 20, &sat); // threshold out of reach
    CHECK(neurons[0].acc == FixedIfNeuron::kAccMax);
    CHECK(sat == 1);
}

TEST_CASE("out-of-range spike addresses fault") {
    WeightRom rom;
    rom.n_pre = 2;
    rom.n_post = 1;
    rom.fmt = FixedPointFormat{3, 6};
    rom.codes = {1, 2};
    std::vector<FixedIfNeuron> neurons(1);
    CHECK_THROWS_AS(fixed_if_layer_step(neurons, {2}, rom, 64), HardwareFault);
}

TEST_CASE("hw_infer requires a quantized model and is deterministic") {
    auto m = init_model({6, 5, 2}, 3);
    std::vector<double> fv{3, 0, 1, 2, 5, 4};
    HwConfig cfg;
    cfg.n_steps = 20;
    CHECK_THROWS_AS(hw_infer(fv, m, cfg), ParameterError);

    const auto q = quantize_model(m, FixedPointFormat{3, 6});
    const auto a = hw_infer(fv, q, cfg);
    const auto b = hw_infer(fv, q, cfg);
    CHECK(a.stats.spikes_per_layer == b.stats.spikes_per_layer);
    CHECK(a.stats.predicted == b.stats.predicted);
    CHECK_FALSE(a.correlated_lanes);

    const auto zero = hw_infer(std::vector<double>(6, 0.0), q, cfg);
    CHECK(zero.stats.total_spikes() == 0);
    CHECK(zero.stats.predicted == 0);
}

TEST_CASE("injected spike words drive hwsim and snn identically") {
    auto m = init_model({8, 6, 2}, 23);
    const auto q = quantize_model(m, FixedPointFormat{3, 6});

    RandomStream rng(31);
    const int steps = 50;
    std::vector<std::vector<std::uint8_t>> words(steps, std::vector<std::uint8_t>(8, 0));
    for (auto& w : words)
        for (auto& b : w) b = rng.uniform01() < 0.4 ? 1 : 0;

    HwConfig hw_cfg;
    hw_cfg.n_steps = steps;
    SnnConfig snn_cfg;
    snn_cfg.n_steps = steps;

    const auto hw = hw_infer_injected(words, q, hw_cfg);
    const auto ref = run_snn_injected(q, words, snn_cfg);
    CHECK(hw.saturation_events == 0);
    CHECK(hw.stats.spikes_per_layer == ref.spikes_per_layer);
    CHECK(hw.stats.output_counts == ref.output_counts);
    CHECK(hw.stats.predicted == ref.predicted);
}

TEST_CASE("trace dump emits one line per stage per step") {
    auto m = init_model({4, 3, 2}, 1);
    const auto q = quantize_model(m, FixedPointFormat{3, 6});
    HwConfig cfg;
    cfg.n_steps = 5;
    const auto run = hw_infer(std::vector<double>{1, 2, 3, 4}, q, cfg, true);
    CHECK(run.trace.size() == 5 * 3); // in, hid, out per step
    CHECK(run.trace[0].rfind("in  ", 0) == 0);
}

TEST_CASE("slice register file saturates at the 13-bit ceiling") {
    SliceRegisterFile rf(10, 5);
    rf.update(2, 1);
    CHECK(rf.count(2, 1) == 1);
    int nonzero = 0;
    for (int d = 0; d < 10; ++d)
        for (int s = 0; s < 5; ++s) nonzero += rf.count(d, s) != 0;
    CHECK(nonzero == 1);

    for (int i = 0; i < 8192; ++i) rf.update(9, 4);
    CHECK(rf.count(9, 4) == 8191);
    rf.update(9, 4);
    CHECK(rf.count(9, 4) == 8191);

    CHECK_THROWS_AS(rf.update(10, 0), HardwareFault);
    CHECK_THROWS_AS(rf.update(0, 5), HardwareFault);
}
