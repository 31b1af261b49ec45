#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "footfall/errors.hpp"

namespace footfall {

/// Feedforward network with ReLU hidden layers and a linear output head.
/// Softmax lives in the loss so the stored weights feed spiking inference
/// directly. weights[l] has dims[l] rows (fan-in) by dims[l+1] columns.
struct MlpModel {
    std::vector<int> dims;
    std::vector<std::vector<double>> weights; // row-major, fan-in x fan-out
    bool zero_bias = true;
    std::string activation = "relu";

    struct Quantization {
        bool applied = false;
        int int_bits = 0;
        int frac_bits = 0;
    } quantization;

    struct TrainInfo {
        std::uint64_t seed = 0;
        double val_accuracy = 0.0;
        int epochs_run = 0;
    } train_info;

    int n_layers() const { return static_cast<int>(dims.size()) - 1; }
    double& w(int layer, int in, int out) {
        return weights[static_cast<std::size_t>(layer)]
                      [static_cast<std::size_t>(in) * static_cast<std::size_t>(dims[layer + 1]) +
                       static_cast<std::size_t>(out)];
    }
    double w(int layer, int in, int out) const {
        return weights[static_cast<std::size_t>(layer)]
                      [static_cast<std::size_t>(in) * static_cast<std::size_t>(dims[layer + 1]) +
                       static_cast<std::size_t>(out)];
    }
};

/// He-style uniform init scaled by fan-in, deterministic per seed.
MlpModel init_model(const std::vector<int>& dims, std::uint64_t seed);

struct TrainConfig {
    double lr = 0.001;
    double dropout_p = 0.5; // hidden layers only
    int batch_size = 32;
    int max_epochs = 100;
    int patience = 10; // early stop when validation accuracy stops improving
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    // additive uniform weight noise during training forward passes, as a
    // fraction of each layer's peak magnitude; hardens the model against
    // the weight-grid error of fixed-point deployment
    double weight_noise = 0.0;
};

/// One labeled feature row, already converted to reals.
struct Sample {
    std::vector<double> features;
    int label = 0;
};

struct FeatureSet {
    std::vector<Sample> train;
    std::vector<Sample> validation;
    std::vector<Sample> test;
};

/// Linear scores (pre-softmax). Throws on dimension mismatch.
std::vector<double> forward(const MlpModel& model, const std::vector<double>& input);

/// argmax with ties to the lower index.
int predict(const MlpModel& model, const std::vector<double>& input);

/// Categorical cross-entropy of softmax(scores) against a one-hot label.
double cross_entropy(const std::vector<double>& scores, int label);

/// Mean loss gradient over a batch; layout matches model.weights.
/// Exposed for gradient verification.
std::vector<std::vector<double>> loss_gradients(const MlpModel& model,
                                                const std::vector<Sample>& batch);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    MlpModel model; // best-validation snapshot
    std::vector<EpochStats> curve;
};

/// Adam + inverted dropout on hidden activations; deterministic per seed.
/// Returns the snapshot with the best validation accuracy.
TrainResult train(const std::vector<Sample>& train_set, const std::vector<Sample>& val_set,
                  const std::vector<int>& dims, const TrainConfig& cfg);

/// Fraction of argmax-correct predictions.
double evaluate(const MlpModel& model, const std::vector<Sample>& samples);

/// Scales each weight matrix so its largest magnitude equals target_max_abs.
/// With zero bias and ReLU this multiplies the scores by a positive constant
/// per layer, so argmax predictions are unchanged; it exists to spread the
/// trained weights over a fixed-point format's dynamic range.
MlpModel rescale_layers(const MlpModel& model, double target_max_abs);

/// Versioned plain-text model format, full double precision.
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

} // namespace footfall
