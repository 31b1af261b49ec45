#pragma once

#include <string>
#include <vector>

#include "footfall/corpus.hpp"
#include "footfall/mlp.hpp"
#include "footfall/robustness.hpp"
#include "footfall/snn.hpp"
#include "footfall/spectral.hpp"
#include "footfall/tespar.hpp"

namespace footfall {

enum class FeatureKind { Ds, FftCase3 };

struct FeatureConfig {
    FeatureKind kind = FeatureKind::Ds;
    int d_max = 10;
    int s_max = 5;
    int fft_n = 128;          // Case-III only
    bool max_normalize = true; // per-sample max normalization of the reals
};

std::string feature_tag(const FeatureConfig& cfg);

/// Raw feature reals for one window (histogram counts or PSD maxima).
std::vector<double> window_features(const AudioWindow& window, const FeatureConfig& cfg);

/// Labeled samples ready for training; applies the configured normalization.
std::vector<Sample> to_samples(const std::vector<LabeledWindow>& windows,
                               const FeatureConfig& cfg);
FeatureSet build_feature_set(const DatasetSplit& dataset, const FeatureConfig& cfg);

/// CSV dump: one `# feature=...` comment line, a header, then value columns
/// followed by the label. Values are the raw (unnormalized) features.
void write_feature_csv(const std::string& path,
                       const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const std::string& tag);

struct FeatureFile {
    std::string tag;
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    std::vector<Sample> to_samples(bool max_normalize = true) const;
};

FeatureFile read_feature_csv(const std::string& path);

/// Deterministic float formatting shared by every CSV artifact.
std::string format_double(double v);

void write_rv_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells);
void write_quant_sweep_csv(const std::string& path, const std::vector<QuantSweepRow>& rows);
void write_variation_sweep_csv(const std::string& path,
                               const std::vector<VariationSweepRow>& rows);

} // namespace footfall
