#include "footfall/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "footfall/rng.hpp"

namespace footfall {

Quantized quantize(double w, const FixedPointFormat& fmt, RoundingMode mode) {
    if (fmt.int_bits < 0 || fmt.frac_bits < 0) throw ParameterError("negative bit widths");
    const double scaled = std::ldexp(w, fmt.frac_bits);
    double code_d = 0.0;
    switch (mode) {
    case RoundingMode::NearestEven:
        code_d = std::nearbyint(scaled); // FE_TONEAREST: ties to even
        break;
    case RoundingMode::Truncate:
        code_d = std::floor(scaled);
        break;
    }
    std::int64_t code = static_cast<std::int64_t>(code_d);
    code = std::clamp(code, fmt.min_code(), fmt.max_code());
    return Quantized{std::ldexp(static_cast<double>(code), -fmt.frac_bits), code};
}

MlpModel quantize_model(const MlpModel& model, const FixedPointFormat& fmt, RoundingMode mode) {
    MlpModel out = model;
    for (auto& layer : out.weights)
        for (double& w : layer) w = quantize(w, fmt, mode).value;
    out.quantization.applied = true;
    out.quantization.int_bits = fmt.int_bits;
    out.quantization.frac_bits = fmt.frac_bits;
    return out;
}

MlpModel perturb_model(const MlpModel& model, const PerturbSpec& spec, int trial) {
    if (spec.sigma_pct < 0.0) throw ParameterError("sigma_pct must be non-negative");
    MlpModel out = model;
    if (spec.sigma_pct == 0.0) return out;
    RandomStream rng(derive_seed(spec.seed, 0x9E27, static_cast<std::uint64_t>(trial)));
    const double sigma = spec.sigma_pct / 100.0;
    for (auto& layer : out.weights) {
        for (double& w : layer) {
            const double g = rng.gaussian(0.0, sigma);
            w = (spec.mode == PerturbMode::RelativeGaussian) ? w * (1.0 + g) : w + g;
        }
    }
    return out;
}

const char* to_string(InferencePath path) {
    return path == InferencePath::Ann ? "ann" : "snn";
}

namespace {

// cell_tag 0 everywhere: all cells of a sweep see identical spike streams,
// so rows with an unperturbed model reproduce the baseline accuracy exactly
double path_accuracy(const MlpModel& model, const std::vector<Sample>& samples,
                     InferencePath path, const SnnConfig& snn_cfg) {
    if (path == InferencePath::Ann) return evaluate(model, samples);
    return evaluate_snn(model, samples, snn_cfg, 0);
}

} // namespace

std::vector<QuantSweepRow> quant_sweep(const MlpModel& model, const std::vector<Sample>& samples,
                                       const std::vector<int>& frac_bits_list, int int_bits,
                                       const std::vector<InferencePath>& paths,
                                       const SnnConfig& snn_cfg, RoundingMode mode) {
    if (frac_bits_list.empty() || paths.empty()) throw ParameterError("empty sweep");
    std::vector<QuantSweepRow> rows;
    for (int fb : frac_bits_list) {
        const auto q = quantize_model(model, FixedPointFormat{int_bits, fb}, mode);
        for (auto path : paths)
            rows.push_back(QuantSweepRow{fb, path, path_accuracy(q, samples, path, snn_cfg)});
    }
    return rows;
}

std::vector<VariationSweepRow> robustness_sweep(const MlpModel& model,
                                                const std::vector<Sample>& samples,
                                                const std::vector<double>& sigmas,
                                                int n_trials, std::uint64_t seed,
                                                const std::vector<InferencePath>& paths,
                                                const SnnConfig& snn_cfg) {
    if (sigmas.empty() || paths.empty()) throw ParameterError("empty sweep");
    if (n_trials < 1) throw ParameterError("n_trials must be >= 1");

    std::vector<VariationSweepRow> rows;
    for (double sigma : sigmas) {
        for (auto path : paths) {
            std::vector<double> accs;
            accs.reserve(static_cast<std::size_t>(n_trials));
            for (int trial = 0; trial < n_trials; ++trial) {
                PerturbSpec spec;
                spec.sigma_pct = sigma;
                spec.n_trials = n_trials;
                spec.seed = seed;
                const auto p = perturb_model(model, spec, trial);
                accs.push_back(path_accuracy(p, samples, path, snn_cfg));
            }
            std::sort(accs.begin(), accs.end());
            const std::size_t n = accs.size();
            const double median = (n % 2 == 1) ? accs[n / 2]
                                               : 0.5 * (accs[n / 2 - 1] + accs[n / 2]);
            rows.push_back(VariationSweepRow{sigma, path, median});
        }
    }
    return rows;
}

} // namespace footfall
