#include "footfall/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "footfall/rng.hpp"

namespace footfall {

namespace {

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw ParameterError("network needs at least two layers");
    for (int d : dims)
        if (d < 0) throw ParameterError("negative layer width");
}

std::vector<double> softmax(const std::vector<double>& scores) {
    const double m = *std::max_element(scores.begin(), scores.end());
    std::vector<double> p(scores.size());
    double z = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        p[i] = std::exp(scores[i] - m);
        z += p[i];
    }
    for (double& v : p) v /= z;
    return p;
}

// forward pass keeping pre-activations and activations for backprop
struct ForwardTrace {
    std::vector<std::vector<double>> acts; // acts[0] = input, acts[L] = scores
};

ForwardTrace forward_trace(const MlpModel& model, const std::vector<double>& input,
                           const std::vector<std::vector<double>>* dropout_mask) {
    ForwardTrace tr;
    tr.acts.resize(model.dims.size());
    tr.acts[0] = input;
    for (int l = 0; l < model.n_layers(); ++l) {
        const int n_in = model.dims[static_cast<std::size_t>(l)];
        const int n_out = model.dims[static_cast<std::size_t>(l) + 1];
        std::vector<double> a(static_cast<std::size_t>(n_out), 0.0);
        const auto& x = tr.acts[static_cast<std::size_t>(l)];
        const auto& w = model.weights[static_cast<std::size_t>(l)];
        for (int i = 0; i < n_in; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            if (xi == 0.0) continue;
            const double* row = w.data() + static_cast<std::size_t>(i) * n_out;
            for (int j = 0; j < n_out; ++j) a[static_cast<std::size_t>(j)] += xi * row[j];
        }
        const bool hidden = l < model.n_layers() - 1;
        if (hidden) {
            for (double& v : a) v = std::max(0.0, v);
            if (dropout_mask)
                for (int j = 0; j < n_out; ++j)
                    a[static_cast<std::size_t>(j)] *=
                        (*dropout_mask)[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        }
        tr.acts[static_cast<std::size_t>(l) + 1] = std::move(a);
    }
    return tr;
}

} // namespace

MlpModel init_model(const std::vector<int>& dims, std::uint64_t seed) {
    check_dims(dims);
    MlpModel m;
    m.dims = dims;
    m.weights.resize(dims.size() - 1);
    RandomStream rng(derive_seed(seed, 0xD1));
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const auto n_in = static_cast<std::size_t>(dims[l]);
        const auto n_out = static_cast<std::size_t>(dims[l + 1]);
        m.weights[l].resize(n_in * n_out);
        const double bound = (n_in > 0) ? std::sqrt(6.0 / static_cast<double>(n_in)) : 0.0;
        for (double& w : m.weights[l]) w = rng.uniform(-bound, bound);
    }
    return m;
}

std::vector<double> forward(const MlpModel& model, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != model.dims.front())
        throw ParameterError("input length does not match the input layer");
    return forward_trace(model, input, nullptr).acts.back();
}

int predict(const MlpModel& model, const std::vector<double>& input) {
    const auto scores = forward(model, input);
    return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

double cross_entropy(const std::vector<double>& scores, int label) {
    if (label < 0 || label >= static_cast<int>(scores.size()))
        throw ParameterError("label out of range");
    const auto p = softmax(scores);
    const double y = std::clamp(p[static_cast<std::size_t>(label)], 1e-12, 1.0);
    return -std::log(y);
}

std::vector<std::vector<double>> loss_gradients(const MlpModel& model,
                                                const std::vector<Sample>& batch) {
    if (batch.empty()) throw ParameterError("empty batch");
    std::vector<std::vector<double>> grads(model.weights.size());
    for (std::size_t l = 0; l < grads.size(); ++l)
        grads[l].assign(model.weights[l].size(), 0.0);

    for (const auto& sample : batch) {
        const auto tr = forward_trace(model, sample.features, nullptr);
        const auto& scores = tr.acts.back();
        auto delta = softmax(scores); // dE/dscores = p - onehot
        delta[static_cast<std::size_t>(sample.label)] -= 1.0;

        for (int l = model.n_layers() - 1; l >= 0; --l) {
            const int n_in = model.dims[static_cast<std::size_t>(l)];
            const int n_out = model.dims[static_cast<std::size_t>(l) + 1];
            const auto& x = tr.acts[static_cast<std::size_t>(l)];
            auto& g = grads[static_cast<std::size_t>(l)];
            for (int i = 0; i < n_in; ++i) {
                const double xi = x[static_cast<std::size_t>(i)];
                if (xi != 0.0) {
                    double* grow = g.data() + static_cast<std::size_t>(i) * n_out;
                    for (int j = 0; j < n_out; ++j)
                        grow[j] += xi * delta[static_cast<std::size_t>(j)];
                }
            }
            if (l > 0) {
                const auto& w = model.weights[static_cast<std::size_t>(l)];
                std::vector<double> prev(static_cast<std::size_t>(n_in), 0.0);
                for (int i = 0; i < n_in; ++i) {
                    // ReLU gate: activation zero means no gradient flows
                    if (x[static_cast<std::size_t>(i)] <= 0.0) continue;
                    const double* row = w.data() + static_cast<std::size_t>(i) * n_out;
                    double acc = 0.0;
                    for (int j = 0; j < n_out; ++j) acc += row[j] * delta[static_cast<std::size_t>(j)];
                    prev[static_cast<std::size_t>(i)] = acc;
                }
                delta = std::move(prev);
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& g : grads)
        for (double& v : g) v *= inv;
    return grads;
}

TrainResult train(const std::vector<Sample>& train_set, const std::vector<Sample>& val_set,
                  const std::vector<int>& dims, const TrainConfig& cfg) {
    check_dims(dims);
    if (train_set.empty() || val_set.empty()) throw ParameterError("empty split");
    if (!(cfg.lr > 0.0)) throw ParameterError("learning rate must be positive");
    if (!(cfg.dropout_p >= 0.0 && cfg.dropout_p < 1.0))
        throw ParameterError("dropout_p must lie in [0,1)");

    MlpModel model = init_model(dims, cfg.seed);
    model.train_info.seed = cfg.seed;

    // Adam state
    std::vector<std::vector<double>> m_adam(model.weights.size()), v_adam(model.weights.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        m_adam[l].assign(model.weights[l].size(), 0.0);
        v_adam[l].assign(model.weights[l].size(), 0.0);
    }
    long long t_adam = 0;

    RandomStream shuffle_rng(derive_seed(cfg.seed, 0x5F));
    RandomStream dropout_rng(derive_seed(cfg.seed, 0xD0));
    RandomStream noise_rng(derive_seed(cfg.seed, 0x7E));

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    MlpModel best = model;
    double best_val = -1.0;
    int best_epoch = -1;

    const double keep_p = 1.0 - cfg.dropout_p;
    const int n_hidden_layers = static_cast<int>(dims.size()) - 2;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        // Fisher-Yates with the dedicated stream
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_index(i);
            std::swap(order[i - 1], order[j]);
        }

        double loss_sum = 0.0;
        std::size_t correct = 0;

        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t bsz = end - begin;

            // fresh inverted-dropout masks per batch
            std::vector<std::vector<double>> mask(static_cast<std::size_t>(
                std::max(0, n_hidden_layers)));
            for (int l = 0; l < n_hidden_layers; ++l) {
                mask[static_cast<std::size_t>(l)].resize(
                    static_cast<std::size_t>(dims[static_cast<std::size_t>(l) + 1]));
                for (double& v : mask[static_cast<std::size_t>(l)])
                    v = (cfg.dropout_p == 0.0 || dropout_rng.uniform01() >= cfg.dropout_p)
                            ? 1.0 / keep_p
                            : 0.0;
            }

            std::vector<std::vector<double>> grads(model.weights.size());
            for (std::size_t l = 0; l < grads.size(); ++l)
                grads[l].assign(model.weights[l].size(), 0.0);

            // fresh weight-noise draw per batch; updates land on the clean
            // weights (straight-through)
            MlpModel noisy;
            const MlpModel& fwd = cfg.weight_noise > 0.0 ? noisy : model;
            if (cfg.weight_noise > 0.0) {
                noisy = model;
                for (auto& layer : noisy.weights) {
                    double peak = 0.0;
                    for (double w : layer) peak = std::max(peak, std::abs(w));
                    const double s = cfg.weight_noise * peak;
                    for (double& w : layer) w += noise_rng.uniform(-s, s);
                }
            }

            for (std::size_t k = begin; k < end; ++k) {
                const auto& sample = train_set[order[k]];
                const auto tr = forward_trace(fwd, sample.features, &mask);
                const auto& scores = tr.acts.back();
                loss_sum += cross_entropy(scores, sample.label);
                const int pred = static_cast<int>(
                    std::max_element(scores.begin(), scores.end()) - scores.begin());
                if (pred == sample.label) ++correct;

                auto delta = softmax(scores);
                delta[static_cast<std::size_t>(sample.label)] -= 1.0;
                for (int l = model.n_layers() - 1; l >= 0; --l) {
                    const int n_in = model.dims[static_cast<std::size_t>(l)];
                    const int n_out = model.dims[static_cast<std::size_t>(l) + 1];
                    const auto& x = tr.acts[static_cast<std::size_t>(l)];
                    auto& g = grads[static_cast<std::size_t>(l)];
                    for (int i = 0; i < n_in; ++i) {
                        const double xi = x[static_cast<std::size_t>(i)];
                        if (xi != 0.0) {
                            double* grow = g.data() + static_cast<std::size_t>(i) * n_out;
                            for (int j = 0; j < n_out; ++j)
                                grow[j] += xi * delta[static_cast<std::size_t>(j)];
                        }
                    }
                    if (l > 0) {
                        const auto& w = fwd.weights[static_cast<std::size_t>(l)];
                        const auto& layer_mask = mask[static_cast<std::size_t>(l) - 1];
                        std::vector<double> prev(static_cast<std::size_t>(n_in), 0.0);
                        for (int i = 0; i < n_in; ++i) {
                            // x is the masked activation; zero means either the
                            // ReLU gate or the dropout mask killed the unit
                            if (x[static_cast<std::size_t>(i)] <= 0.0) continue;
                            const double* row = w.data() + static_cast<std::size_t>(i) * n_out;
                            double acc = 0.0;
                            for (int j = 0; j < n_out; ++j)
                                acc += row[j] * delta[static_cast<std::size_t>(j)];
                            prev[static_cast<std::size_t>(i)] =
                                acc * layer_mask[static_cast<std::size_t>(i)];
                        }
                        delta = std::move(prev);
                    }
                }
            }

            ++t_adam;
            const double b1t = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t_adam));
            const double b2t = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t_adam));
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                for (std::size_t i = 0; i < model.weights[l].size(); ++i) {
                    const double g = grads[l][i] / static_cast<double>(bsz);
                    m_adam[l][i] = cfg.adam_beta1 * m_adam[l][i] + (1.0 - cfg.adam_beta1) * g;
                    v_adam[l][i] = cfg.adam_beta2 * v_adam[l][i] + (1.0 - cfg.adam_beta2) * g * g;
                    const double mhat = m_adam[l][i] / b1t;
                    const double vhat = v_adam[l][i] / b2t;
                    model.weights[l][i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
                }
            }
        }

        EpochStats st;
        st.epoch = epoch;
        st.train_loss = loss_sum / static_cast<double>(train_set.size());
        st.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
        st.val_accuracy = evaluate(model, val_set);
        result.curve.push_back(st);

        if (st.val_accuracy > best_val) {
            best_val = st.val_accuracy;
            best = model;
            best.train_info.seed = cfg.seed;
            best.train_info.val_accuracy = best_val;
            best_epoch = epoch;
        }
        if (epoch - best_epoch >= cfg.patience) break;
    }

    best.train_info.epochs_run = static_cast<int>(result.curve.size());
    result.model = std::move(best);
    return result;
}

double evaluate(const MlpModel& model, const std::vector<Sample>& samples) {
    if (samples.empty()) throw ParameterError("empty evaluation split");
    std::size_t correct = 0;
    for (const auto& s : samples)
        if (predict(model, s.features) == s.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

MlpModel rescale_layers(const MlpModel& model, double target_max_abs) {
    if (!(target_max_abs > 0.0)) throw ParameterError("target magnitude must be positive");
    if (!model.zero_bias)
        throw ParameterError("per-layer rescaling needs a zero-bias model to keep predictions");
    MlpModel out = model;
    for (auto& layer : out.weights) {
        double peak = 0.0;
        for (double w : layer) peak = std::max(peak, std::abs(w));
        if (peak == 0.0) continue;
        const double k = target_max_abs / peak;
        for (double& w : layer) w *= k;
    }
    return out;
}

void save_model(const MlpModel& model, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "footfall-model v1\n";
    f << "dims";
    for (int d : model.dims) f << ' ' << d;
    f << "\nzero_bias " << (model.zero_bias ? 1 : 0) << "\n";
    f << "activation " << model.activation << "\n";
    f << "seed " << model.train_info.seed << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", model.train_info.val_accuracy);
    f << "val_accuracy " << buf << "\n";
    if (model.quantization.applied)
        f << "quantized fixed 1 " << model.quantization.int_bits << ' '
          << model.quantization.frac_bits << "\n";
    else
        f << "quantized none\n";
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const auto n_in = static_cast<std::size_t>(model.dims[l]);
        const auto n_out = static_cast<std::size_t>(model.dims[l + 1]);
        f << "layer " << l << ' ' << n_in << ' ' << n_out << "\n";
        for (std::size_t i = 0; i < n_in; ++i) {
            for (std::size_t j = 0; j < n_out; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", model.weights[l][i * n_out + j]);
                f << buf << (j + 1 < n_out ? " " : "");
            }
            f << "\n";
        }
    }
    f << "end\n";
    if (!f) throw IoError("write failed: " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != "footfall-model v1")
        throw FormatError(path + ": not a footfall-model v1 file");

    MlpModel m;
    std::string key;
    while (f >> key) {
        if (key == "dims") {
            std::getline(f, line);
            std::istringstream ss(line);
            int d;
            while (ss >> d) m.dims.push_back(d);
            check_dims(m.dims);
        } else if (key == "zero_bias") {
            int v;
            f >> v;
            m.zero_bias = (v != 0);
        } else if (key == "activation") {
            f >> m.activation;
        } else if (key == "seed") {
            f >> m.train_info.seed;
        } else if (key == "val_accuracy") {
            f >> m.train_info.val_accuracy;
        } else if (key == "quantized") {
            std::string kind;
            f >> kind;
            if (kind == "fixed") {
                int sign_bits;
                f >> sign_bits >> m.quantization.int_bits >> m.quantization.frac_bits;
                m.quantization.applied = true;
            } else if (kind != "none") {
                throw FormatError(path + ": unknown quantization tag " + kind);
            }
        } else if (key == "layer") {
            std::size_t l, n_in, n_out;
            f >> l >> n_in >> n_out;
            if (m.dims.empty() || l != m.weights.size())
                throw FormatError(path + ": layer blocks out of order");
            if (n_in != static_cast<std::size_t>(m.dims[l]) ||
                n_out != static_cast<std::size_t>(m.dims[l + 1]))
                throw FormatError(path + ": layer shape mismatch");
            std::vector<double> w(n_in * n_out);
            for (double& v : w)
                if (!(f >> v)) throw IoError(path + ": truncated weight matrix");
            m.weights.push_back(std::move(w));
        } else if (key == "end") {
            if (m.weights.size() + 1 != m.dims.size())
                throw FormatError(path + ": missing layers");
            return m;
        } else {
            throw FormatError(path + ": unknown key " + key);
        }
    }
    throw IoError(path + ": missing end marker");
}

} // namespace footfall
