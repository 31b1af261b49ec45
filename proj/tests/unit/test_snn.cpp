#include <doctest.h>

#include <cmath>

#include "footfall/rng.hpp"
#include "footfall/snn.hpp"

using namespace footfall;

namespace {

MlpModel chain_1_1_1(double w1, double w2) {
    MlpModel m;
    m.dims = {1, 1, 1};
    m.weights = {{w1}, {w2}};
    return m;
}

} // namespace

TEST_CASE("all-zero features never spike") {
    const std::vector<double> fv(8, 0.0);
    SnnConfig cfg;
    for (int step = 0; step < 50; ++step) {
        const auto spikes = encode_spikes(fv, cfg, step);
        for (auto b : spikes) CHECK(b == 0);
    }
}

TEST_CASE("saturated probability spikes every step") {
    SnnConfig cfg;
    cfg.r_max_hz = 4000.0; // c = 4
    const std::vector<double> fv{1.0, 0.0};
    for (int step = 0; step < 100; ++step) {
        const auto spikes = encode_spikes(fv, cfg, step);
        CHECK(spikes[0] == 1);
        CHECK(spikes[1] == 0);
    }
}

TEST_CASE("empirical spike rate concentrates at the Bernoulli probability") {
    SnnConfig cfg;
    cfg.seed = 19;
    const std::vector<double> fv{1.0, 0.5}; // fv_norm = (1, 0.5), c = 1
    std::size_t hits = 0;
    const int steps = 10000;
    for (int step = 0; step < steps; ++step) hits += encode_spikes(fv, cfg, step)[1];
    const double rate = static_cast<double>(hits) / steps;
    CHECK(std::abs(rate - 0.5) <= 0.02);
}

TEST_CASE("encoding is deterministic per (seed, step)") {
    SnnConfig cfg;
    cfg.seed = 100;
    const std::vector<double> fv{0.8, 0.3, 0.6};
    CHECK(encode_spikes(fv, cfg, 7) == encode_spikes(fv, cfg, 7));
    cfg.seed = 101;
    // different seed, same step: not forced equal (overwhelmingly different)
    // just confirm it runs; distributional checks live above
    (void)encode_spikes(fv, cfg, 7);
}

TEST_CASE("integrate-and-fire single steps") {
    SnnConfig cfg; // v_t = 1
    SUBCASE("two spikes crossing threshold fire and reset") {
        NeuronState st;
        const std::vector<std::uint8_t> in{1, 1};
        const std::vector<double> w{0.6, 0.5};
        CHECK(if_step(st, in, w, cfg));
        CHECK(st.v_mem == 0.0);
    }
    SUBCASE("sub-threshold accumulation fires on the second step") {
        NeuronState st;
        const std::vector<std::uint8_t> in{1};
        const std::vector<double> w{0.6};
        CHECK_FALSE(if_step(st, in, w, cfg));
        CHECK(st.v_mem == doctest::Approx(0.6));
        CHECK(if_step(st, in, w, cfg));
        CHECK(st.v_mem == 0.0);
    }
    SUBCASE("no incoming spikes leaves the state unchanged") {
        NeuronState st;
        st.v_mem = 0.4;
        const std::vector<std::uint8_t> in{0, 0};
        const std::vector<double> w{0.6, 0.5};
        CHECK_FALSE(if_step(st, in, w, cfg));
        CHECK(st.v_mem == 0.4);
    }
    SUBCASE("width mismatch is rejected") {
        NeuronState st;
        const std::vector<std::uint8_t> in{1};
        const std::vector<double> w{0.6, 0.5};
        CHECK_THROWS_AS(if_step(st, in, w, cfg), ParameterError);
    }
}

TEST_CASE("non-convertible models are rejected") {
    auto m = chain_1_1_1(2.0, 2.0);
    m.zero_bias = false;
    SnnConfig cfg;
    CHECK_THROWS_AS(run_snn(m, std::vector<double>{1.0}, cfg), ConversionError);
    m.zero_bias = true;
    m.activation = "tanh";
    CHECK_THROWS_AS(run_snn(m, std::vector<double>{1.0}, cfg), ConversionError);
}

TEST_CASE("hand-simulated 1-1-1 chain spikes on every step") {
    const auto m = chain_1_1_1(2.0, 2.0);
    SnnConfig cfg; // c = 1, v_t = 1
    cfg.n_steps = 40;
    const auto stats = run_snn(m, std::vector<double>{1.0}, cfg);
    CHECK(stats.spikes_per_layer[0] == 40); // p = 1: input fires always
    CHECK(stats.spikes_per_layer[1] == 40); // v jumps to 2 > 1 each step
    CHECK(stats.spikes_per_layer[2] == 40);
    CHECK(stats.output_counts[0] == 40);
}

TEST_CASE("all-zero feature vector predicts class 0 by tie-break") {
    MlpModel m;
    m.dims = {3, 4, 2};
    m.weights = {std::vector<double>(12, 0.5), std::vector<double>(8, 0.5)};
    SnnConfig cfg;
    const auto stats = run_snn(m, std::vector<double>{0, 0, 0}, cfg);
    CHECK(stats.total_spikes() == 0);
    CHECK(stats.predicted == 0);
    CHECK(stats.tie);
}

TEST_CASE("unreachable threshold leaves only the majority-class rate") {
    const auto m = chain_1_1_1(2.0, 2.0);
    SnnConfig cfg;
    cfg.v_t = 1e18;
    std::vector<Sample> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(Sample{{1.0}, i % 2});
    CHECK(evaluate_snn(m, samples, cfg) == 0.5);
}

TEST_CASE("runs are reproducible") {
    const auto m = init_model({6, 5, 2}, 3);
    RandomStream rng(9);
    std::vector<double> fv(6);
    for (double& v : fv) v = rng.uniform01();
    SnnConfig cfg;
    cfg.seed = 77;
    const auto a = run_snn(m, fv, cfg);
    const auto b = run_snn(m, fv, cfg);
    CHECK(a.spikes_per_layer == b.spikes_per_layer);
    CHECK(a.output_counts == b.output_counts);
    CHECK(a.predicted == b.predicted);
}

TEST_CASE("degenerate sweep grid equals a direct evaluation") {
    const auto m = init_model({4, 5, 2}, 6);
    RandomStream rng(2);
    std::vector<Sample> samples;
    for (int i = 0; i < 12; ++i) {
        Sample s;
        s.features = {rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
        s.label = i % 2;
        samples.push_back(std::move(s));
    }
    SnnConfig cfg;
    cfg.seed = 5;
    const auto cells = sweep_rv(m, samples, {1000.0}, {1.0}, cfg);
    REQUIRE(cells.size() == 1);
    SnnConfig direct = cfg;
    direct.r_max_hz = 1000.0;
    direct.v_t = 1.0;
    CHECK(cells[0].accuracy == evaluate_snn(m, samples, direct, 0));
}

TEST_CASE("spike stats reproduce the published activity fractions") {
    SnnRunStats stats;
    stats.spikes_per_layer = {343, 330, 31};
    const auto summary = spike_stats(stats, {50, 80, 2}, 100);
    CHECK(summary.grand_total == 704);
    CHECK(summary.activity_fraction[0] == doctest::Approx(0.0686).epsilon(1e-12));
    CHECK(summary.activity_fraction[1] == doctest::Approx(0.04125).epsilon(1e-12));

    SnnRunStats zero;
    zero.spikes_per_layer = {0, 0, 0};
    CHECK(spike_stats(zero, {50, 80, 2}, 100).grand_total == 0);
}
