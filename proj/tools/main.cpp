// footfall: acoustic footstep classification pipeline
//
// Subcommands cover the whole chain: synthetic corpus generation, feature
// extraction, network training, spiking inference, the hardware-model path,
// fixed-point and variation sweeps, energy accounting, and a deterministic
// end-to-end reproduction run.

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "footfall/corpus.hpp"
#include "footfall/dsp.hpp"
#include "footfall/energy.hpp"
#include "footfall/hwsim.hpp"
#include "footfall/mlp.hpp"
#include "footfall/pipeline.hpp"
#include "footfall/robustness.hpp"
#include "footfall/snn.hpp"
#include "footfall/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::string sha256_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw footfall::IoError("cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(buf.data(), buf.size(), digest, &len, EVP_sha256(), nullptr))
        throw footfall::IoError("sha256 failed for " + path.string());
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

struct CorpusRow {
    std::string path;
    int label = 0;
    std::string split;
    std::string kind;
    int walkers = 0;
};

void write_labels_csv(const fs::path& dir, const std::vector<CorpusRow>& rows) {
    std::ofstream f(dir / "labels.csv", std::ios::trunc);
    if (!f) throw footfall::IoError("cannot create labels.csv");
    f << "path,label,split,kind,walkers\n";
    for (const auto& r : rows)
        f << r.path << ',' << r.label << ',' << r.split << ',' << r.kind << ',' << r.walkers
          << '\n';
}

std::vector<CorpusRow> read_labels_csv(const fs::path& dir) {
    std::ifstream f(dir / "labels.csv");
    if (!f) throw footfall::IoError("cannot open " + (dir / "labels.csv").string());
    std::vector<CorpusRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ss(line);
        CorpusRow r;
        std::string label, walkers;
        std::getline(ss, r.path, ',');
        std::getline(ss, label, ',');
        std::getline(ss, r.split, ',');
        std::getline(ss, r.kind, ',');
        std::getline(ss, walkers, ',');
        r.label = std::stoi(label);
        r.walkers = walkers.empty() ? 0 : std::stoi(walkers);
        rows.push_back(std::move(r));
    }
    return rows;
}

void dump_corpus(const footfall::DatasetSplit& ds, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<CorpusRow> rows;
    const auto dump_split = [&](const std::vector<footfall::LabeledWindow>& split,
                                const char* name) {
        for (const auto& lw : split) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%06llu.wav",
                          static_cast<unsigned long long>(lw.meta.id));
            footfall::AudioBuffer wav{lw.window.samples, lw.window.sample_rate_hz};
            footfall::save_wav((out_dir / buf).string(), wav);
            rows.push_back(CorpusRow{buf, lw.label, name, footfall::to_string(lw.meta.kind),
                                     lw.meta.walkers});
        }
    };
    dump_split(ds.train, "train");
    dump_split(ds.validation, "validation");
    dump_split(ds.test, "test");
    write_labels_csv(out_dir, rows);
}

footfall::FeatureConfig feature_config_from(const std::string& feature, int dmax, int smax,
                                            int fft_n) {
    footfall::FeatureConfig cfg;
    cfg.d_max = dmax;
    cfg.s_max = smax;
    cfg.fft_n = fft_n;
    if (feature == "ds")
        cfg.kind = footfall::FeatureKind::Ds;
    else if (feature == "fft_case3")
        cfg.kind = footfall::FeatureKind::FftCase3;
    else
        throw footfall::ParameterError("unknown feature kind " + feature);
    return cfg;
}

std::vector<int> parse_dims(const std::string& s) {
    std::vector<int> dims;
    std::istringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) dims.push_back(std::stoi(cell));
    return dims;
}

json stats_to_json(const footfall::SnnRunStats& stats) {
    json j;
    j["spikes_per_layer"] = stats.spikes_per_layer;
    j["output_counts"] = stats.output_counts;
    j["predicted"] = stats.predicted;
    j["tie"] = stats.tie;
    j["total_spikes"] = stats.total_spikes();
    json steps = json::array();
    for (const auto& s : stats.output_step_spikes) steps.push_back(s);
    j["output_step_spikes"] = std::move(steps);
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw footfall::IoError("cannot create " + path.string());
    f << text;
}

// ---------------------------------------------------------------------------
// subcommand payloads

struct CorpusSynthArgs {
    std::uint64_t seed = 0;
    std::size_t count = 1600; // total, split across the two classes
    std::string out;
    int fs_hz = 11025;
    double window_s = 5.0;
};

void run_corpus_synth(const CorpusSynthArgs& a) {
    footfall::SynthSpec spec;
    spec.seed = a.seed;
    spec.per_class = std::max<std::size_t>(1, a.count / 2);
    spec.sample_rate_hz = a.fs_hz;
    spec.window_s = a.window_s;
    const auto ds = footfall::build_dataset(spec);
    dump_corpus(ds, a.out);
    std::printf("wrote %zu windows to %s (train %zu / val %zu / test %zu)\n",
                ds.train.size() + ds.validation.size() + ds.test.size(), a.out.c_str(),
                ds.train.size(), ds.validation.size(), ds.test.size());
}

struct CorpusImportArgs {
    std::string manifest;
    std::string out;
    int fs_hz = 11025;
    double window_s = 5.0;
    double hop_s = 5.0;
    double passband_hz = 5000.0;
    double stopband_hz = 6000.0;
};

void run_corpus_import(const CorpusImportArgs& a) {
    const auto entries = footfall::load_manifest(a.manifest);
    fs::create_directories(a.out);
    std::vector<CorpusRow> rows;
    std::size_t next_id = 0;
    std::vector<std::size_t> class_count(2, 0);

    std::vector<std::pair<footfall::AudioWindow, int>> windows;
    for (const auto& [path, label] : entries) {
        auto buf = footfall::load_wav(path);
        if (buf.sample_rate_hz != a.fs_hz) {
            if (a.stopband_hz < buf.sample_rate_hz / 2.0)
                buf = footfall::lowpass(buf,
                                        footfall::FilterSpec{a.passband_hz, a.stopband_hz, 40.0});
            buf = footfall::resample(buf, a.fs_hz);
        }
        for (auto& w : footfall::window_stream(buf, a.window_s, a.hop_s)) {
            windows.emplace_back(std::move(w), label);
            ++class_count[static_cast<std::size_t>(label)];
        }
    }

    // per-class largest-remainder split, assigned in input order
    std::array<std::array<std::size_t, 3>, 2> quota{};
    for (int c = 0; c < 2; ++c)
        quota[static_cast<std::size_t>(c)] = footfall::largest_remainder_split(
            class_count[static_cast<std::size_t>(c)], footfall::SplitWeights{});
    std::array<std::array<std::size_t, 3>, 2> used{};
    const char* names[3] = {"train", "validation", "test"};

    for (auto& [window, label] : windows) {
        auto& u = used[static_cast<std::size_t>(label)];
        const auto& q = quota[static_cast<std::size_t>(label)];
        std::size_t slot = 0;
        while (slot < 2 && u[slot] >= q[slot]) ++slot;
        ++u[slot];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%06zu.wav", next_id++);
        footfall::save_wav((fs::path(a.out) / buf).string(),
                           footfall::AudioBuffer{window.samples, window.sample_rate_hz});
        rows.push_back(CorpusRow{buf, label, names[slot], "imported", 0});
    }
    write_labels_csv(a.out, rows);
    std::printf("imported %zu windows (%zu class 0, %zu class 1) into %s\n", windows.size(),
                class_count[0], class_count[1], a.out.c_str());
}

struct FeaturesArgs {
    std::string corpus;
    std::string out;
    std::string split = "all";
    std::string feature = "ds";
    int dmax = 10;
    int smax = 5;
    int fft_n = 128;
    double slice_s = 0.5;
};

void run_features_extract(const FeaturesArgs& a) {
    const auto cfg = feature_config_from(a.feature, a.dmax, a.smax, a.fft_n);
    const auto rows = read_labels_csv(a.corpus);
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    for (const auto& r : rows) {
        if (a.split != "all" && r.split != a.split) continue;
        const auto buf = footfall::load_wav((fs::path(a.corpus) / r.path).string());
        footfall::AudioWindow w{buf.samples, buf.sample_rate_hz,
                                static_cast<double>(buf.samples.size()) / buf.sample_rate_hz};
        features.push_back(footfall::window_features(w, cfg));
        labels.push_back(r.label);
    }
    footfall::write_feature_csv(a.out, features, labels, footfall::feature_tag(cfg));
    std::printf("wrote %zu feature rows (%s) to %s\n", features.size(),
                footfall::feature_tag(cfg).c_str(), a.out.c_str());
}

struct TrainArgs {
    std::string train_features;
    std::string val_features;
    std::string out;
    std::string curve_out;
    std::string dims = "50,80,2";
    std::uint64_t seed = 0;
    double lr = 0.001;
    double dropout = 0.5;
    int batch = 32;
    int epochs = 100;
    int patience = 10;
    double condition_max = 1.5; // 0 disables the deployment rescale
};

footfall::MlpModel run_train(const TrainArgs& a) {
    const auto train_file = footfall::read_feature_csv(a.train_features);
    const auto val_file = footfall::read_feature_csv(a.val_features);
    footfall::TrainConfig cfg;
    cfg.lr = a.lr;
    cfg.dropout_p = a.dropout;
    cfg.batch_size = a.batch;
    cfg.max_epochs = a.epochs;
    cfg.patience = a.patience;
    cfg.seed = a.seed;
    auto result = footfall::train(train_file.to_samples(), val_file.to_samples(),
                                  parse_dims(a.dims), cfg);
    auto model = a.condition_max > 0.0
                     ? footfall::rescale_layers(result.model, a.condition_max)
                     : result.model;
    model.train_info = result.model.train_info;
    footfall::save_model(model, a.out);
    if (!a.curve_out.empty()) {
        std::ostringstream ss;
        ss << "epoch,train_loss,train_accuracy,val_accuracy\n";
        for (const auto& st : result.curve)
            ss << st.epoch << ',' << footfall::format_double(st.train_loss) << ','
               << footfall::format_double(st.train_accuracy) << ','
               << footfall::format_double(st.val_accuracy) << '\n';
        write_text(a.curve_out, ss.str());
    }
    std::printf("trained %s: best val accuracy %s after %d epochs -> %s\n", a.dims.c_str(),
                footfall::format_double(model.train_info.val_accuracy).c_str(),
                model.train_info.epochs_run, a.out.c_str());
    return model;
}

struct EvalArgs {
    std::string model;
    std::string features;
};

void run_eval(const EvalArgs& a) {
    const auto model = footfall::load_model(a.model);
    const auto file = footfall::read_feature_csv(a.features);
    const double acc = footfall::evaluate(model, file.to_samples());
    std::printf("accuracy %s on %zu samples\n", footfall::format_double(acc).c_str(),
                file.labels.size());
}

struct SnnRunArgs {
    std::string model;
    std::string features;
    std::size_t index = 0;
    double r_hz = 1000.0;
    double vt = 1.0;
    double dt = 0.001;
    int steps = 100;
    std::uint64_t seed = 0;
    std::string stats_out;
};

void run_snn_cmd(const SnnRunArgs& a) {
    const auto model = footfall::load_model(a.model);
    const auto file = footfall::read_feature_csv(a.features);
    if (a.index >= file.features.size())
        throw footfall::ParameterError("sample index out of range");
    footfall::SnnConfig cfg;
    cfg.r_max_hz = a.r_hz;
    cfg.v_t = a.vt;
    cfg.dt_s = a.dt;
    cfg.n_steps = a.steps;
    cfg.seed = a.seed;
    const auto samples = file.to_samples();
    const auto stats =
        footfall::run_snn(model, std::span<const double>(samples[a.index].features), cfg);
    const auto summary = footfall::spike_stats(stats, model.dims, cfg.n_steps);

    json j = stats_to_json(stats);
    j["label"] = file.labels[a.index];
    j["activity_fraction"] = summary.activity_fraction;
    const std::string text = j.dump(2) + "\n";
    if (a.stats_out.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text(a.stats_out, text);
}

struct SnnSweepArgs {
    std::string model;
    std::string features;
    std::string out;
    std::vector<double> r_grid{200, 500, 1000, 2000, 3000, 4000};
    std::vector<double> vt_grid{0.25, 0.5, 1, 2, 4, 10, 20};
    double dt = 0.001;
    int steps = 100;
    std::uint64_t seed = 0;
};

void run_snn_sweep(const SnnSweepArgs& a) {
    const auto model = footfall::load_model(a.model);
    const auto file = footfall::read_feature_csv(a.features);
    footfall::SnnConfig cfg;
    cfg.dt_s = a.dt;
    cfg.n_steps = a.steps;
    cfg.seed = a.seed;
    const auto cells = footfall::sweep_rv(model, file.to_samples(), a.r_grid, a.vt_grid, cfg);
    footfall::write_rv_sweep_csv(a.out, cells);
    std::printf("wrote %zu sweep cells to %s\n", cells.size(), a.out.c_str());
}

struct HwsimArgs {
    std::string model;
    std::string features;
    std::size_t index = 0;
    int steps = 100;
    double vt = 1.0;
    std::uint64_t seed = 0;
    bool strict_compare = false;
    int int_bits = 3;
    int frac_bits = 6;
    std::string trace_out;
    std::string rom_prefix;
    std::string stats_out;
};

void run_hwsim_cmd(const HwsimArgs& a) {
    auto model = footfall::load_model(a.model);
    if (!model.quantization.applied)
        model = footfall::quantize_model(model,
                                         footfall::FixedPointFormat{a.int_bits, a.frac_bits});
    const auto file = footfall::read_feature_csv(a.features);
    if (a.index >= file.features.size())
        throw footfall::ParameterError("sample index out of range");

    footfall::HwConfig cfg;
    cfg.n_steps = a.steps;
    cfg.v_t = a.vt;
    cfg.seed = a.seed;
    cfg.strict_compare = a.strict_compare;
    const bool keep_trace = !a.trace_out.empty();
    const auto run = footfall::hw_infer(file.features[a.index], model, cfg, keep_trace);

    if (!a.rom_prefix.empty()) {
        for (int l = 0; l < model.n_layers(); ++l) {
            const auto rom = footfall::build_weight_rom(model, l);
            std::ostringstream ss;
            for (const auto& line : footfall::dump_rom_image(rom)) ss << line << '\n';
            write_text(a.rom_prefix + "_layer" + std::to_string(l) + ".hex", ss.str());
        }
    }
    if (keep_trace) {
        std::ostringstream ss;
        for (const auto& line : run.trace) ss << line << '\n';
        write_text(a.trace_out, ss.str());
    }
    json j = stats_to_json(run.stats);
    j["label"] = file.labels[a.index];
    j["saturation_events"] = run.saturation_events;
    j["correlated_lanes"] = run.correlated_lanes;
    const std::string text = j.dump(2) + "\n";
    if (a.stats_out.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text(a.stats_out, text);
}

struct QuantSweepArgs {
    std::string model;
    std::string features;
    std::string out;
    std::vector<int> frac_bits{1, 2, 3, 4, 5, 6};
    int int_bits = 3;
    std::string paths = "ann,snn";
    bool trunc = false;
    double r_hz = 1000.0;
    double vt = 1.0;
    int steps = 100;
    std::uint64_t seed = 0;
};

std::vector<footfall::InferencePath> parse_paths(const std::string& s) {
    std::vector<footfall::InferencePath> paths;
    std::istringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell == "ann")
            paths.push_back(footfall::InferencePath::Ann);
        else if (cell == "snn")
            paths.push_back(footfall::InferencePath::Snn);
        else
            throw footfall::ParameterError("unknown path " + cell);
    }
    return paths;
}

void run_quant_sweep(const QuantSweepArgs& a) {
    const auto model = footfall::load_model(a.model);
    const auto file = footfall::read_feature_csv(a.features);
    footfall::SnnConfig cfg;
    cfg.r_max_hz = a.r_hz;
    cfg.v_t = a.vt;
    cfg.n_steps = a.steps;
    cfg.seed = a.seed;
    const auto rows = footfall::quant_sweep(
        model, file.to_samples(), a.frac_bits, a.int_bits, parse_paths(a.paths), cfg,
        a.trunc ? footfall::RoundingMode::Truncate : footfall::RoundingMode::NearestEven);
    footfall::write_quant_sweep_csv(a.out, rows);
    std::printf("wrote %zu quantization rows to %s\n", rows.size(), a.out.c_str());
}

struct VariationSweepArgs {
    std::string model;
    std::string features;
    std::string out;
    std::vector<double> sigmas{0, 5, 10, 20, 30, 50, 100};
    int trials = 5;
    std::string paths = "ann,snn";
    double r_hz = 1000.0;
    double vt = 1.0;
    int steps = 100;
    std::uint64_t seed = 0;
};

void run_variation_sweep(const VariationSweepArgs& a) {
    const auto model = footfall::load_model(a.model);
    const auto file = footfall::read_feature_csv(a.features);
    footfall::SnnConfig cfg;
    cfg.r_max_hz = a.r_hz;
    cfg.v_t = a.vt;
    cfg.n_steps = a.steps;
    cfg.seed = a.seed;
    const auto rows = footfall::robustness_sweep(model, file.to_samples(), a.sigmas, a.trials,
                                                 a.seed, parse_paths(a.paths), cfg);
    footfall::write_variation_sweep_csv(a.out, rows);
    std::printf("wrote %zu variation rows to %s\n", rows.size(), a.out.c_str());
}

struct EnergyArgs {
    std::uint64_t nspk = 700;
    std::string table;
    std::string out;
};

fs::path default_energy_table() {
    if (const char* env = std::getenv("FOOTFALL_DATA_DIR"))
        return fs::path(env) / "energy_table.csv";
    const fs::path local = "data/energy_table.csv";
    if (fs::exists(local)) return local;
    std::error_code ec;
    const auto exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        // installed layout: <prefix>/bin/footfall -> <prefix>/share/footfall
        const auto installed = exe.parent_path().parent_path() / "share" / "footfall" /
                               "energy_table.csv";
        if (fs::exists(installed)) return installed;
    }
#ifdef FOOTFALL_SOURCE_DATA
    if (fs::exists(FOOTFALL_SOURCE_DATA)) return fs::path(FOOTFALL_SOURCE_DATA);
#endif
    return local;
}

void run_energy_report(const EnergyArgs& a) {
    const fs::path table_path = a.table.empty() ? default_energy_table() : fs::path(a.table);
    const auto table = footfall::load_energy_table(table_path.string());
    const auto rows = footfall::energy_estimate(a.nspk, table);
    std::ostringstream ss;
    ss << "ref_id,pj_per_spike_min,pj_per_spike_max,total_pj_min,total_pj_max\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& e = table.entries[i];
        ss << e.ref_id << ',' << footfall::format_double(e.pj_per_spike_min) << ','
           << footfall::format_double(e.pj_per_spike_max) << ','
           << footfall::format_double(rows[i].total_pj_min) << ','
           << footfall::format_double(rows[i].total_pj_max) << '\n';
    }
    if (a.out.empty())
        std::fputs(ss.str().c_str(), stdout);
    else
        write_text(a.out, ss.str());
}

struct ReproArgs {
    std::uint64_t seed = 7;
    std::string out;
    std::size_t per_class = 800;
    bool dump_corpus = false;
    std::string energy_table;
    double condition_max = 1.5;
};

void run_repro(const ReproArgs& a) {
    const fs::path out_dir(a.out);
    fs::create_directories(out_dir);
    std::vector<fs::path> artifacts;

    // corpus
    footfall::SynthSpec spec;
    spec.seed = a.seed;
    spec.per_class = a.per_class;
    const auto ds = footfall::build_dataset(spec);
    if (a.dump_corpus) {
        dump_corpus(ds, out_dir / "corpus");
        artifacts.push_back(out_dir / "corpus" / "labels.csv");
    }

    // features
    const footfall::FeatureConfig fcfg;
    const auto feats = footfall::build_feature_set(ds, fcfg);
    const auto dump_features = [&](const std::vector<footfall::LabeledWindow>& split,
                                   const std::string& name) {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (const auto& lw : split) {
            rows.push_back(footfall::window_features(lw.window, fcfg));
            labels.push_back(lw.label);
        }
        const auto path = out_dir / ("features_" + name + ".csv");
        footfall::write_feature_csv(path.string(), rows, labels, footfall::feature_tag(fcfg));
        artifacts.push_back(path);
    };
    dump_features(ds.train, "train");
    dump_features(ds.validation, "validation");
    dump_features(ds.test, "test");

    // train
    footfall::TrainConfig tcfg;
    tcfg.seed = a.seed;
    auto result = footfall::train(feats.train, feats.validation, {50, 80, 2}, tcfg);
    auto model = a.condition_max > 0.0 ? footfall::rescale_layers(result.model, a.condition_max)
                                       : result.model;
    model.train_info = result.model.train_info;
    const auto model_path = out_dir / "model.txt";
    footfall::save_model(model, model_path.string());
    artifacts.push_back(model_path);
    {
        std::ostringstream ss;
        ss << "epoch,train_loss,train_accuracy,val_accuracy\n";
        for (const auto& st : result.curve)
            ss << st.epoch << ',' << footfall::format_double(st.train_loss) << ','
               << footfall::format_double(st.train_accuracy) << ','
               << footfall::format_double(st.val_accuracy) << '\n';
        const auto path = out_dir / "training_curve.csv";
        write_text(path, ss.str());
        artifacts.push_back(path);
    }

    // rate/threshold sweep
    footfall::SnnConfig scfg;
    scfg.seed = a.seed;
    const auto cells = footfall::sweep_rv(model, feats.test, {200, 500, 1000, 2000, 3000, 4000},
                                          {0.25, 0.5, 1, 2, 4, 10, 20}, scfg);
    const auto sweep_path = out_dir / "snn_sweep.csv";
    footfall::write_rv_sweep_csv(sweep_path.string(), cells);
    artifacts.push_back(sweep_path);

    // quantization and variation sweeps
    const auto paths = parse_paths("ann,snn");
    const auto quant =
        footfall::quant_sweep(model, feats.test, {1, 2, 3, 4, 5, 6}, 3, paths, scfg);
    const auto quant_path = out_dir / "quant_sweep.csv";
    footfall::write_quant_sweep_csv(quant_path.string(), quant);
    artifacts.push_back(quant_path);

    const auto var = footfall::robustness_sweep(model, feats.test, {0, 5, 10, 20, 30, 50, 100},
                                                5, a.seed, paths, scfg);
    const auto var_path = out_dir / "variation_sweep.csv";
    footfall::write_variation_sweep_csv(var_path.string(), var);
    artifacts.push_back(var_path);

    // spike statistics and energy for a representative inference
    footfall::SnnRunStats rep_stats;
    if (!feats.test.empty()) {
        rep_stats = footfall::run_snn(
            model, std::span<const double>(feats.test.front().features), scfg);
        json j = stats_to_json(rep_stats);
        j["activity_fraction"] =
            footfall::spike_stats(rep_stats, model.dims, scfg.n_steps).activity_fraction;
        const auto path = out_dir / "snn_stats.json";
        write_text(path, j.dump(2) + "\n");
        artifacts.push_back(path);
    }
    {
        EnergyArgs ea;
        ea.nspk = rep_stats.total_spikes();
        ea.table = a.energy_table;
        ea.out = (out_dir / "energy_report.csv").string();
        run_energy_report(ea);
        artifacts.push_back(out_dir / "energy_report.csv");
    }

    // manifest with content hashes
    json manifest;
    manifest["schema"] = kSchemaVersion;
    manifest["seed"] = a.seed;
    manifest["per_class"] = a.per_class;
    manifest["condition_max"] = a.condition_max;
    manifest["ann_test_accuracy"] = footfall::evaluate(model, feats.test);
    json files = json::array();
    std::sort(artifacts.begin(), artifacts.end());
    for (const auto& p : artifacts) {
        json f;
        f["path"] = fs::relative(p, out_dir).generic_string();
        f["bytes"] = fs::file_size(p);
        f["sha256"] = sha256_file(p);
        files.push_back(std::move(f));
    }
    manifest["artifacts"] = std::move(files);
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    std::printf("repro complete: %zu artifacts in %s\n", artifacts.size() + 1, a.out.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"footfall: time-domain acoustic classification with spiking inference"};
    app.set_config("--config", "", "INI/TOML config file; flags override config values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    int schema = kSchemaVersion;
    app.add_option("--schema", schema, "config schema version")
        ->check(CLI::IsMember({kSchemaVersion}));
    app.require_subcommand(1);

    // corpus
    auto* corpus = app.add_subcommand("corpus", "build or import labeled datasets");
    corpus->require_subcommand(1);
    CorpusSynthArgs cs;
    auto* synth = corpus->add_subcommand("synth", "generate the deterministic synthetic corpus");
    synth->add_option("--seed", cs.seed, "master seed");
    synth->add_option("--count", cs.count, "total window count (split across classes)");
    synth->add_option("--out", cs.out, "output directory")->required();
    synth->add_option("--fs", cs.fs_hz, "sample rate, Hz");
    synth->add_option("--window-s", cs.window_s, "window duration, s");
    synth->callback([&] { run_corpus_synth(cs); });

    CorpusImportArgs ci;
    auto* imp = corpus->add_subcommand("import", "ingest real WAVs from a path,label manifest");
    imp->add_option("--manifest", ci.manifest, "CSV manifest: path,label")->required();
    imp->add_option("--out", ci.out, "output directory")->required();
    imp->add_option("--fs", ci.fs_hz, "working sample rate, Hz");
    imp->add_option("--window-s", ci.window_s, "window duration, s");
    imp->add_option("--hop-s", ci.hop_s, "window hop, s");
    imp->add_option("--passband-hz", ci.passband_hz, "low-pass passband edge");
    imp->add_option("--stopband-hz", ci.stopband_hz, "low-pass stopband edge");
    imp->callback([&] { run_corpus_import(ci); });

    // features
    auto* features = app.add_subcommand("features", "feature extraction");
    features->require_subcommand(1);
    FeaturesArgs fa;
    auto* extract = features->add_subcommand("extract", "extract feature vectors from a corpus");
    extract->add_option("--corpus", fa.corpus, "corpus directory (wav + labels.csv)")->required();
    extract->add_option("--out", fa.out, "output CSV")->required();
    extract->add_option("--split", fa.split, "train|validation|test|all");
    extract->add_option("--feature", fa.feature, "ds | fft_case3");
    extract->add_option("--dmax", fa.dmax, "D bin count");
    extract->add_option("--smax", fa.smax, "S bin count");
    extract->add_option("--fft-n", fa.fft_n, "FFT size for fft_case3");
    extract->add_option("--slice-s", fa.slice_s, "slice duration, s (streaming granularity)");
    extract->callback([&] { run_features_extract(fa); });

    // train / eval
    TrainArgs ta;
    auto* tr = app.add_subcommand("train", "train the classifier");
    tr->add_option("--train-features", ta.train_features, "training feature CSV")->required();
    tr->add_option("--val-features", ta.val_features, "validation feature CSV")->required();
    tr->add_option("--out", ta.out, "model output path")->required();
    tr->add_option("--curve", ta.curve_out, "training curve CSV");
    tr->add_option("--dims", ta.dims, "layer sizes, comma separated");
    tr->add_option("--seed", ta.seed, "training seed");
    tr->add_option("--lr", ta.lr, "learning rate");
    tr->add_option("--dropout", ta.dropout, "hidden dropout probability");
    tr->add_option("--batch", ta.batch, "batch size");
    tr->add_option("--epochs", ta.epochs, "max epochs");
    tr->add_option("--patience", ta.patience, "early-stop patience");
    tr->add_option("--condition-max", ta.condition_max,
                   "post-training per-layer peak magnitude (0 = keep raw weights)");
    tr->callback([&] { run_train(ta); });

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "evaluate a model on a feature CSV");
    ev->add_option("--model", ea.model, "model file")->required();
    ev->add_option("--features", ea.features, "feature CSV")->required();
    ev->callback([&] { run_eval(ea); });

    // snn
    auto* snn = app.add_subcommand("snn", "spiking inference");
    snn->require_subcommand(1);
    SnnRunArgs sr;
    auto* srun = snn->add_subcommand("run", "run one spiking inference");
    srun->add_option("--model", sr.model)->required();
    srun->add_option("--features", sr.features)->required();
    srun->add_option("--index", sr.index, "sample row index");
    srun->add_option("--r", sr.r_hz, "max input rate, Hz");
    srun->add_option("--vt", sr.vt, "threshold potential");
    srun->add_option("--dt", sr.dt, "step size, s");
    srun->add_option("--steps", sr.steps, "step count");
    srun->add_option("--seed", sr.seed);
    srun->add_option("--stats-out", sr.stats_out, "stats JSON path (default stdout)");
    srun->callback([&] { run_snn_cmd(sr); });

    SnnSweepArgs ss;
    auto* ssweep = snn->add_subcommand("sweep", "rate/threshold accuracy grid");
    ssweep->add_option("--model", ss.model)->required();
    ssweep->add_option("--features", ss.features)->required();
    ssweep->add_option("--out", ss.out, "output CSV")->required();
    ssweep->add_option("--r-grid", ss.r_grid, "input rates, Hz");
    ssweep->add_option("--vt-grid", ss.vt_grid, "thresholds");
    ssweep->add_option("--dt", ss.dt);
    ssweep->add_option("--steps", ss.steps);
    ssweep->add_option("--seed", ss.seed);
    ssweep->callback([&] { run_snn_sweep(ss); });

    // hwsim
    auto* hw = app.add_subcommand("hwsim", "bit-exact digital hardware model");
    hw->require_subcommand(1);
    HwsimArgs ha;
    auto* hrun = hw->add_subcommand("run", "run the hardware inference path");
    hrun->add_option("--model", ha.model)->required();
    hrun->add_option("--features", ha.features)->required();
    hrun->add_option("--index", ha.index, "sample row index");
    hrun->add_option("--steps", ha.steps);
    hrun->add_option("--vt", ha.vt, "threshold potential");
    hrun->add_option("--seed", ha.seed, "LFSR seeding");
    hrun->add_flag("--strict-compare", ha.strict_compare,
                   "spike iff q > state (default compares against state-1)");
    hrun->add_option("--int-bits", ha.int_bits, "quantization integer bits");
    hrun->add_option("--frac-bits", ha.frac_bits, "quantization fractional bits");
    hrun->add_option("--trace", ha.trace_out, "per-step spike word trace file");
    hrun->add_option("--dump-rom", ha.rom_prefix, "weight ROM hex image path prefix");
    hrun->add_option("--stats-out", ha.stats_out, "stats JSON path (default stdout)");
    hrun->callback([&] { run_hwsim_cmd(ha); });

    // sweeps
    auto* sweep = app.add_subcommand("sweep", "robustness sweeps");
    sweep->require_subcommand(1);
    QuantSweepArgs qa;
    auto* qs = sweep->add_subcommand("quant", "accuracy vs fractional weight bits");
    qs->add_option("--model", qa.model)->required();
    qs->add_option("--features", qa.features)->required();
    qs->add_option("--out", qa.out, "output CSV")->required();
    qs->add_option("--frac-bits", qa.frac_bits, "fractional bit counts");
    qs->add_option("--int-bits", qa.int_bits, "integer bits");
    qs->add_option("--paths", qa.paths, "ann,snn");
    qs->add_flag("--trunc", qa.trunc, "truncate instead of round-to-nearest-even");
    qs->add_option("--r", qa.r_hz);
    qs->add_option("--vt", qa.vt);
    qs->add_option("--steps", qa.steps);
    qs->add_option("--seed", qa.seed);
    qs->callback([&] { run_quant_sweep(qa); });

    VariationSweepArgs va;
    auto* vs = sweep->add_subcommand("variation", "accuracy vs Gaussian weight deviation");
    vs->add_option("--model", va.model)->required();
    vs->add_option("--features", va.features)->required();
    vs->add_option("--out", va.out, "output CSV")->required();
    vs->add_option("--sigmas", va.sigmas, "percent standard deviations");
    vs->add_option("--trials", va.trials, "trials per sigma");
    vs->add_option("--paths", va.paths, "ann,snn");
    vs->add_option("--r", va.r_hz);
    vs->add_option("--vt", va.vt);
    vs->add_option("--steps", va.steps);
    vs->add_option("--seed", va.seed);
    vs->callback([&] { run_variation_sweep(va); });

    // energy
    auto* energy = app.add_subcommand("energy", "spike-count energy accounting");
    energy->require_subcommand(1);
    EnergyArgs ga;
    auto* report = energy->add_subcommand("report", "energy totals per published figure");
    report->add_option("--nspk", ga.nspk, "total spike count of one inference");
    report->add_option("--table", ga.table, "energy table CSV");
    report->add_option("--out", ga.out, "output CSV (default stdout)");
    report->callback([&] { run_energy_report(ga); });

    // repro
    ReproArgs ra;
    auto* repro = app.add_subcommand("repro", "full deterministic pipeline run");
    repro->add_option("--seed", ra.seed, "master seed");
    repro->add_option("--out", ra.out, "output directory")->required();
    repro->add_option("--per-class", ra.per_class, "windows per class");
    repro->add_flag("--dump-corpus", ra.dump_corpus, "also write the corpus WAVs");
    repro->add_option("--table", ra.energy_table, "energy table CSV");
    repro->add_option("--condition-max", ra.condition_max, "deployment weight scale");
    repro->callback([&] { run_repro(ra); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help and friends
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
