#include "footfall/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace footfall {

std::string feature_tag(const FeatureConfig& cfg) {
    if (cfg.kind == FeatureKind::Ds)
        return "ds_" + std::to_string(cfg.d_max) + "x" + std::to_string(cfg.s_max);
    return "fft_case3_" + std::to_string(cfg.fft_n);
}

std::vector<double> window_features(const AudioWindow& window, const FeatureConfig& cfg) {
    if (cfg.kind == FeatureKind::Ds) {
        const auto fv = extract_fv(window, cfg.d_max, cfg.s_max);
        return std::vector<double>(fv.values.begin(), fv.values.end());
    }
    return spectral_fv_case3(window, cfg.fft_n).values;
}

namespace {

std::vector<double> maybe_normalize(std::vector<double> v, bool normalize) {
    if (!normalize) return v;
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    if (m > 0.0)
        for (double& x : v) x /= m;
    return v;
}

} // namespace

std::vector<Sample> to_samples(const std::vector<LabeledWindow>& windows,
                               const FeatureConfig& cfg) {
    std::vector<Sample> out;
    out.reserve(windows.size());
    for (const auto& lw : windows)
        out.push_back(Sample{maybe_normalize(window_features(lw.window, cfg), cfg.max_normalize),
                             lw.label});
    return out;
}

FeatureSet build_feature_set(const DatasetSplit& dataset, const FeatureConfig& cfg) {
    return FeatureSet{to_samples(dataset.train, cfg), to_samples(dataset.validation, cfg),
                      to_samples(dataset.test, cfg)};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_feature_csv(const std::string& path,
                       const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const std::string& tag) {
    if (features.size() != labels.size()) throw ParameterError("features/labels size mismatch");
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "# feature=" << tag << "\n";
    if (!features.empty()) {
        for (std::size_t i = 0; i < features.front().size(); ++i) f << 'v' << i << ',';
        f << "label\n";
    }
    for (std::size_t r = 0; r < features.size(); ++r) {
        for (double v : features[r]) f << format_double(v) << ',';
        f << labels[r] << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

FeatureFile read_feature_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    FeatureFile file;
    std::string line;
    bool saw_header = false;
    std::size_t width = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# feature=", 0) == 0) {
            file.tag = line.substr(10);
            continue;
        }
        if (line[0] == '#') continue;
        if (!saw_header && line.rfind("v0,", 0) == 0) {
            saw_header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw FormatError(path + ": row needs values and a label");
        const int label = static_cast<int>(row.back());
        row.pop_back();
        if (width == 0) width = row.size();
        if (row.size() != width) throw FormatError(path + ": ragged rows");
        file.features.push_back(std::move(row));
        file.labels.push_back(label);
    }
    if (file.features.empty()) throw FormatError(path + ": no feature rows");
    return file;
}

std::vector<Sample> FeatureFile::to_samples(bool max_normalize) const {
    std::vector<Sample> out;
    out.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i)
        out.push_back(Sample{maybe_normalize(features[i], max_normalize), labels[i]});
    return out;
}

void write_rv_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "r_hz,v_t,accuracy\n";
    for (const auto& c : cells)
        f << format_double(c.r_hz) << ',' << format_double(c.v_t) << ','
          << format_double(c.accuracy) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

void write_quant_sweep_csv(const std::string& path, const std::vector<QuantSweepRow>& rows) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "frac_bits,path,accuracy\n";
    for (const auto& r : rows)
        f << r.frac_bits << ',' << to_string(r.path) << ',' << format_double(r.accuracy) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

void write_variation_sweep_csv(const std::string& path,
                               const std::vector<VariationSweepRow>& rows) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "sigma_pct,path,median_accuracy\n";
    for (const auto& r : rows)
        f << format_double(r.sigma_pct) << ',' << to_string(r.path) << ','
          << format_double(r.median_accuracy) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

} // namespace footfall
