#pragma once

#include <cstdint>
#include <vector>

#include "footfall/mlp.hpp"
#include "footfall/snn.hpp"

namespace footfall {

/// Signed fixed-point layout: 1 sign bit + int_bits + frac_bits.
struct FixedPointFormat {
    int int_bits = 3;
    int frac_bits = 6;

    int total_bits() const { return 1 + int_bits + frac_bits; }
    double resolution() const { return std::ldexp(1.0, -frac_bits); }
    double max_value() const { return std::ldexp(1.0, int_bits) - resolution(); }
    double min_value() const { return -std::ldexp(1.0, int_bits); }
    std::int64_t max_code() const { return (std::int64_t{1} << (int_bits + frac_bits)) - 1; }
    std::int64_t min_code() const { return -(std::int64_t{1} << (int_bits + frac_bits)); }
};

enum class RoundingMode { NearestEven, Truncate };

struct Quantized {
    double value = 0.0;
    std::int64_t code = 0;
};

/// Round-to-nearest (ties to even) onto the format's grid with saturation.
/// Truncation mode reproduces pure bit-chopping toward negative infinity.
Quantized quantize(double w, const FixedPointFormat& fmt,
                   RoundingMode mode = RoundingMode::NearestEven);

/// Quantizes every weight; records the format in the model metadata.
MlpModel quantize_model(const MlpModel& model, const FixedPointFormat& fmt,
                        RoundingMode mode = RoundingMode::NearestEven);

enum class PerturbMode { RelativeGaussian, AbsoluteGaussian };

struct PerturbSpec {
    double sigma_pct = 0.0; // std-dev as % of each weight's magnitude
    int n_trials = 1;
    std::uint64_t seed = 0;
    PerturbMode mode = PerturbMode::RelativeGaussian;
};

/// w -> w * (1 + g), g ~ N(0, sigma_pct/100), independent per weight and
/// deterministic per (seed, trial). Absolute mode adds g directly.
MlpModel perturb_model(const MlpModel& model, const PerturbSpec& spec, int trial);

enum class InferencePath { Ann, Snn };
const char* to_string(InferencePath path);

struct QuantSweepRow {
    int frac_bits = 0;
    InferencePath path = InferencePath::Ann;
    double accuracy = 0.0;
};

/// Accuracy vs fractional bit count, int_bits fixed.
std::vector<QuantSweepRow> quant_sweep(const MlpModel& model, const std::vector<Sample>& samples,
                                       const std::vector<int>& frac_bits_list, int int_bits,
                                       const std::vector<InferencePath>& paths,
                                       const SnnConfig& snn_cfg,
                                       RoundingMode mode = RoundingMode::NearestEven);

struct VariationSweepRow {
    double sigma_pct = 0.0;
    InferencePath path = InferencePath::Ann;
    double median_accuracy = 0.0;
};

/// Median accuracy over n_trials independent perturbations, per sigma and path.
std::vector<VariationSweepRow> robustness_sweep(const MlpModel& model,
                                                const std::vector<Sample>& samples,
                                                const std::vector<double>& sigmas,
                                                int n_trials, std::uint64_t seed,
                                                const std::vector<InferencePath>& paths,
                                                const SnnConfig& snn_cfg);

} // namespace footfall
