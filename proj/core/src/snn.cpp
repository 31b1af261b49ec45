#include "footfall/snn.hpp"

#include <algorithm>
#include <cmath>

#include "footfall/rng.hpp"

namespace footfall {

namespace {

void require_convertible(const MlpModel& model) {
    if (!model.zero_bias)
        throw ConversionError("spiking inference requires a zero-bias model");
    if (model.activation != "relu")
        throw ConversionError("spiking inference requires ReLU hidden activations");
}

// core loop shared by the stochastic and injected entry points
SnnRunStats run_core(const MlpModel& model, const SnnConfig& cfg,
                     const std::vector<double>* fv_norm,
                     const std::vector<std::vector<std::uint8_t>>* injected,
                     std::uint64_t encode_seed) {
    require_convertible(model);
    if (cfg.n_steps < 1) throw ParameterError("n_steps must be >= 1");
    if (!(cfg.v_t > 0.0)) throw ParameterError("v_t must be positive");

    const int n_layers = model.n_layers();
    const int n_out = model.dims.back();

    std::vector<std::vector<double>> v(static_cast<std::size_t>(n_layers));
    for (int l = 0; l < n_layers; ++l)
        v[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(model.dims[static_cast<std::size_t>(l) + 1]), 0.0);

    SnnRunStats stats;
    stats.spikes_per_layer.assign(static_cast<std::size_t>(n_layers) + 1, 0);
    stats.output_counts.assign(static_cast<std::size_t>(n_out), 0);
    stats.output_step_spikes.reserve(static_cast<std::size_t>(cfg.n_steps));

    SnnConfig step_cfg = cfg;
    step_cfg.seed = encode_seed;

    std::vector<std::uint8_t> cur, next;
    for (int step = 0; step < cfg.n_steps; ++step) {
        if (injected) {
            cur = (*injected)[static_cast<std::size_t>(step)];
            if (cur.size() != static_cast<std::size_t>(model.dims.front()))
                throw ParameterError("injected spike word width mismatch");
        } else {
            cur = encode_spikes(*fv_norm, step_cfg, step);
        }
        for (auto b : cur) stats.spikes_per_layer[0] += b;

        for (int l = 0; l < n_layers; ++l) {
            const int n_in = model.dims[static_cast<std::size_t>(l)];
            const int n_o = model.dims[static_cast<std::size_t>(l) + 1];
            auto& vl = v[static_cast<std::size_t>(l)];
            const auto& w = model.weights[static_cast<std::size_t>(l)];
            for (int i = 0; i < n_in; ++i) {
                if (!cur[static_cast<std::size_t>(i)]) continue;
                const double* row = w.data() + static_cast<std::size_t>(i) * n_o;
                for (int j = 0; j < n_o; ++j) vl[static_cast<std::size_t>(j)] += row[j];
            }
            next.assign(static_cast<std::size_t>(n_o), 0);
            for (int j = 0; j < n_o; ++j) {
                if (vl[static_cast<std::size_t>(j)] > cfg.v_t) {
                    next[static_cast<std::size_t>(j)] = 1;
                    vl[static_cast<std::size_t>(j)] = cfg.v_res;
                }
            }
            std::uint64_t c = 0;
            for (auto b : next) c += b;
            stats.spikes_per_layer[static_cast<std::size_t>(l) + 1] += c;
            cur.swap(next);
        }

        stats.output_step_spikes.push_back(cur);
        for (int j = 0; j < n_out; ++j) stats.output_counts[static_cast<std::size_t>(j)] += cur[static_cast<std::size_t>(j)];
    }

    const auto it = std::max_element(stats.output_counts.begin(), stats.output_counts.end());
    stats.predicted = static_cast<int>(it - stats.output_counts.begin());
    stats.tie = std::count(stats.output_counts.begin(), stats.output_counts.end(), *it) > 1;
    return stats;
}

} // namespace

std::vector<double> normalize_fv(std::span<const double> fv) {
    double m = 0.0;
    for (double v : fv) m = std::max(m, v);
    std::vector<double> out(fv.size(), 0.0);
    if (m > 0.0)
        for (std::size_t i = 0; i < fv.size(); ++i) out[i] = fv[i] / m;
    return out;
}

std::vector<double> normalize_fv(const FeatureVector& fv) {
    std::vector<double> reals(fv.values.begin(), fv.values.end());
    return normalize_fv(std::span<const double>(reals));
}

std::vector<std::uint8_t> encode_spikes(std::span<const double> fv, const SnnConfig& cfg,
                                        int step) {
    const auto fvn = normalize_fv(fv);
    const double c = cfg.dt_s * cfg.r_max_hz;
    RandomStream rng(derive_seed(cfg.seed, 0xE5C0DE, static_cast<std::uint64_t>(step)));
    std::vector<std::uint8_t> spikes(fvn.size(), 0);
    for (std::size_t i = 0; i < fvn.size(); ++i) {
        const double p = std::min(c * fvn[i], 1.0);
        spikes[i] = (rng.uniform01() < p) ? 1 : 0;
    }
    return spikes;
}

bool if_step(NeuronState& state, std::span<const std::uint8_t> incoming,
             std::span<const double> fan_in_weights, const SnnConfig& cfg) {
    if (incoming.size() != fan_in_weights.size())
        throw ParameterError("spike vector and weight column lengths differ");
    for (std::size_t i = 0; i < incoming.size(); ++i)
        if (incoming[i]) state.v_mem += fan_in_weights[i];
    state.spiked = state.v_mem > cfg.v_t;
    if (state.spiked) state.v_mem = cfg.v_res;
    return state.spiked;
}

SnnRunStats run_snn(const MlpModel& model, std::span<const double> fv, const SnnConfig& cfg) {
    if (fv.size() != static_cast<std::size_t>(model.dims.front()))
        throw ParameterError("feature length does not match the input layer");
    const auto fvn = normalize_fv(fv);
    return run_core(model, cfg, &fvn, nullptr, cfg.seed);
}

SnnRunStats run_snn(const MlpModel& model, const FeatureVector& fv, const SnnConfig& cfg) {
    std::vector<double> reals(fv.values.begin(), fv.values.end());
    return run_snn(model, std::span<const double>(reals), cfg);
}

SnnRunStats run_snn_injected(const MlpModel& model,
                             const std::vector<std::vector<std::uint8_t>>& input_spikes,
                             const SnnConfig& cfg) {
    if (input_spikes.size() != static_cast<std::size_t>(cfg.n_steps))
        throw ParameterError("need one spike word per step");
    return run_core(model, cfg, nullptr, &input_spikes, cfg.seed);
}

double evaluate_snn(const MlpModel& model, const std::vector<Sample>& samples,
                    const SnnConfig& cfg, std::uint64_t cell_tag) {
    if (samples.empty()) throw ParameterError("empty evaluation split");
    std::size_t correct = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        SnnConfig per = cfg;
        per.seed = derive_seed(cfg.seed, 0xACC, cell_tag, k);
        const auto stats = run_snn(model, std::span<const double>(samples[k].features), per);
        if (stats.predicted == samples[k].label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::vector<SweepCell> sweep_rv(const MlpModel& model, const std::vector<Sample>& samples,
                                const std::vector<double>& r_grid,
                                const std::vector<double>& vt_grid, const SnnConfig& cfg) {
    if (r_grid.empty() || vt_grid.empty()) throw ParameterError("empty sweep grid");
    std::vector<SweepCell> cells;
    cells.reserve(r_grid.size() * vt_grid.size());
    std::uint64_t tag = 0;
    for (double vt : vt_grid) {
        for (double r : r_grid) {
            SnnConfig c = cfg;
            c.r_max_hz = r;
            c.v_t = vt;
            cells.push_back(SweepCell{r, vt, evaluate_snn(model, samples, c, tag)});
            ++tag;
        }
    }
    return cells;
}

SpikeSummary spike_stats(const SnnRunStats& stats, const std::vector<int>& dims, int n_steps) {
    if (stats.spikes_per_layer.size() != dims.size())
        throw ParameterError("stats layer count does not match dims");
    SpikeSummary s;
    s.per_layer = stats.spikes_per_layer;
    s.grand_total = stats.total_spikes();
    s.activity_fraction.resize(dims.size());
    for (std::size_t l = 0; l < dims.size(); ++l) {
        const double denom = static_cast<double>(dims[l]) * static_cast<double>(n_steps);
        s.activity_fraction[l] = denom > 0.0 ? static_cast<double>(s.per_layer[l]) / denom : 0.0;
    }
    return s;
}

} // namespace footfall
