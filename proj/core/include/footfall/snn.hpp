#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "footfall/mlp.hpp"
#include "footfall/tespar.hpp"

namespace footfall {

struct SnnConfig {
    double r_max_hz = 1000.0;
    double v_t = 1.0;       // threshold, same units as the trained weights
    double dt_s = 0.001;
    int n_steps = 100;
    double v_res = 0.0;     // post-spike reset potential
    std::uint64_t seed = 0;
};

struct NeuronState {
    double v_mem = 0.0;
    bool spiked = false;
};

struct SnnRunStats {
    std::vector<std::uint64_t> spikes_per_layer;            // [input, hidden..., output]
    std::vector<std::vector<std::uint8_t>> output_step_spikes; // n_steps x n_out
    std::vector<std::uint64_t> output_counts;
    int predicted = 0;
    bool tie = false; // equal output counts; prediction fell back to lower index

    std::uint64_t total_spikes() const {
        std::uint64_t t = 0;
        for (auto s : spikes_per_layer) t += s;
        return t;
    }
};

/// Max-normalization used before rate coding (all-zero input stays zero).
std::vector<double> normalize_fv(std::span<const double> fv);
std::vector<double> normalize_fv(const FeatureVector& fv);

/// Bernoulli rate coding for one time step: neuron i spikes iff
/// u < min(c * fv_norm[i], 1) with c = dt_s * r_max_hz and u drawn from a
/// deterministic per-step stream.
std::vector<std::uint8_t> encode_spikes(std::span<const double> fv, const SnnConfig& cfg,
                                        int step);

/// Single integrate-and-fire update: accumulate the weights of the spiking
/// inputs, fire on strict threshold crossing, reset to v_res. No leak, no
/// refractory period.
bool if_step(NeuronState& state, std::span<const std::uint8_t> incoming,
             std::span<const double> fan_in_weights, const SnnConfig& cfg);

/// Time-stepped inference with stochastic input encoding. The model must be
/// zero-bias ReLU (the rate-coding correspondence needs both).
SnnRunStats run_snn(const MlpModel& model, std::span<const double> fv, const SnnConfig& cfg);
SnnRunStats run_snn(const MlpModel& model, const FeatureVector& fv, const SnnConfig& cfg);

/// Same dynamics with caller-provided input spike words (bypasses the RNG);
/// used to cross-validate against the hardware model.
SnnRunStats run_snn_injected(const MlpModel& model,
                             const std::vector<std::vector<std::uint8_t>>& input_spikes,
                             const SnnConfig& cfg);

/// Accuracy of spiking inference over a labeled feature set. Per-sample
/// seeds are derived from (cfg.seed, cell_tag, sample index) so sweep cells
/// can be evaluated in any order.
double evaluate_snn(const MlpModel& model, const std::vector<Sample>& samples,
                    const SnnConfig& cfg, std::uint64_t cell_tag = 0);

struct SweepCell {
    double r_hz = 0.0;
    double v_t = 0.0;
    double accuracy = 0.0;
};

/// Accuracy grid over (input rate, threshold), shaped like the (r, V_t)
/// study: one cell per combination.
std::vector<SweepCell> sweep_rv(const MlpModel& model, const std::vector<Sample>& samples,
                                const std::vector<double>& r_grid,
                                const std::vector<double>& vt_grid, const SnnConfig& cfg);

struct SpikeSummary {
    std::vector<std::uint64_t> per_layer;
    std::uint64_t grand_total = 0;
    std::vector<double> activity_fraction; // per layer: total / (neurons * steps)
};

SpikeSummary spike_stats(const SnnRunStats& stats, const std::vector<int>& dims, int n_steps);

} // namespace footfall
