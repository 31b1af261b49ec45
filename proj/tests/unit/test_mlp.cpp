#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "footfall/mlp.hpp"
#include "footfall/rng.hpp"

using namespace footfall;

namespace {

MlpModel identity_2_2_2() {
    MlpModel m;
    m.dims = {2, 2, 2};
    m.weights = {{1, 0, 0, 1}, {1, 0, 0, 1}};
    return m;
}

// central finite differences of the mean batch loss
double fd_gradient(MlpModel& model, const std::vector<Sample>& batch, int layer, std::size_t idx,
                   double step) {
    auto& w = model.weights[static_cast<std::size_t>(layer)][idx];
    const double saved = w;
    auto batch_loss = [&]() {
        double acc = 0.0;
        for (const auto& s : batch) acc += cross_entropy(forward(model, s.features), s.label);
        return acc / static_cast<double>(batch.size());
    };
    w = saved + step;
    const double up = batch_loss();
    w = saved - step;
    const double down = batch_loss();
    w = saved;
    return (up - down) / (2.0 * step);
}

std::vector<Sample> random_batch(std::uint64_t seed, int n, int dim, int classes) {
    RandomStream rng(seed);
    std::vector<Sample> batch;
    for (int i = 0; i < n; ++i) {
        Sample s;
        s.features.resize(static_cast<std::size_t>(dim));
        for (double& v : s.features) v = rng.uniform01();
        s.label = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(classes)));
        batch.push_back(std::move(s));
    }
    return batch;
}

} // namespace

TEST_CASE("identity weights pass the input straight through") {
    const auto m = identity_2_2_2();
    const auto scores = forward(m, {1.0, -1.0});
    CHECK(scores[0] == 1.0);
    CHECK(scores[1] == 0.0); // ReLU clipped the negative lane
    CHECK(predict(m, {1.0, -1.0}) == 0);
}

TEST_CASE("zero input with zero bias scores zero and breaks ties low") {
    const auto m = identity_2_2_2();
    const auto scores = forward(m, {0.0, 0.0});
    CHECK(scores == std::vector<double>{0.0, 0.0});
    CHECK(predict(m, {0.0, 0.0}) == 0);
}

TEST_CASE("positive input scaling scales scores and keeps the argmax") {
    const auto m = init_model({5, 7, 3}, 3);
    RandomStream rng(8);
    std::vector<double> x(5);
    for (double& v : x) v = rng.uniform01();
    const auto s1 = forward(m, x);
    for (double& v : x) v *= 2.0;
    const auto s2 = forward(m, x);
    for (std::size_t i = 0; i < s1.size(); ++i)
        CHECK(s2[i] == doctest::Approx(2.0 * s1[i]).epsilon(1e-12));
}

TEST_CASE("dimension mismatch is rejected") {
    const auto m = identity_2_2_2();
    CHECK_THROWS_AS(forward(m, {1.0, 2.0, 3.0}), ParameterError);
}

TEST_CASE("cross entropy of uniform scores is ln 2") {
    CHECK(cross_entropy({0.0, 0.0}, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(cross_entropy({100.0, 0.0}, 0)) <= 1e-6);
    CHECK(cross_entropy({-50.0, 50.0}, 0) >= 0.0);
}

TEST_CASE("analytic gradients match central differences") {
    auto model = init_model({6, 8, 3}, 12);
    const auto batch = random_batch(34, 5, 6, 3);
    const auto grads = loss_gradients(model, batch);
    for (int l = 0; l < model.n_layers(); ++l) {
        for (std::size_t i = 0; i < grads[static_cast<std::size_t>(l)].size(); ++i) {
            const double g = grads[static_cast<std::size_t>(l)][i];
            const double fd = fd_gradient(model, batch, l, i, 1e-5);
            const double denom = std::max({std::abs(g), std::abs(fd), 1e-8});
            CHECK(std::abs(g - fd) / denom <= 1e-4);
        }
    }
}

TEST_CASE("training fits a linearly separable toy set") {
    // two cones through the origin; zero-bias ReLU nets separate these
    RandomStream rng(5);
    std::vector<Sample> train_set, val_set;
    for (int i = 0; i < 400; ++i) {
        const double r = rng.uniform(0.2, 1.0);
        const bool cls = i % 2 == 0;
        const double angle = cls ? rng.uniform(0.1, 0.6) : rng.uniform(0.9, 1.4);
        Sample s{{r * std::cos(angle), r * std::sin(angle)}, cls ? 0 : 1};
        (i % 5 == 0 ? val_set : train_set).push_back(std::move(s));
    }
    TrainConfig cfg;
    cfg.seed = 2;
    cfg.max_epochs = 50;
    cfg.dropout_p = 0.0;
    const auto result = train(train_set, val_set, {2, 8, 2}, cfg);
    CHECK(evaluate(result.model, train_set) >= 0.99);
    CHECK(result.curve.size() <= 50);
}

TEST_CASE("training is deterministic per seed") {
    const auto data = random_batch(77, 60, 4, 2);
    const std::vector<Sample> val(data.begin(), data.begin() + 10);
    TrainConfig cfg;
    cfg.seed = 31;
    cfg.max_epochs = 5;
    const auto a = train(data, val, {4, 6, 2}, cfg);
    const auto b = train(data, val, {4, 6, 2}, cfg);
    CHECK(a.model.weights == b.model.weights);
    CHECK(a.curve.back().train_loss == b.curve.back().train_loss);
}

TEST_CASE("evaluation is dropout-free and order-invariant") {
    auto data = random_batch(15, 40, 4, 2);
    TrainConfig cfg;
    cfg.seed = 1;
    cfg.max_epochs = 3;
    const auto result = train(data, data, {4, 6, 2}, cfg);
    const double acc1 = evaluate(result.model, data);
    std::reverse(data.begin(), data.end());
    const double acc2 = evaluate(result.model, data);
    CHECK(acc1 == acc2);
}

TEST_CASE("constant predictor scores one half on a balanced split") {
    MlpModel m;
    m.dims = {2, 2};
    m.weights = {{0, 0, 0, 0}}; // always scores (0,0) -> class 0
    std::vector<Sample> split;
    for (int i = 0; i < 10; ++i) split.push_back(Sample{{1.0, 1.0}, i % 2});
    CHECK(evaluate(m, split) == 0.5);
}

TEST_CASE("model file round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "ff_model.txt").string();
    auto m = init_model({3, 4, 2}, 9);
    m.train_info.val_accuracy = 0.875;
    save_model(m, path);
    const auto back = load_model(path);
    CHECK(back.dims == m.dims);
    CHECK(back.weights == m.weights); // %.17g round-trips doubles exactly
    CHECK(back.zero_bias == m.zero_bias);
    CHECK(back.train_info.val_accuracy == m.train_info.val_accuracy);

    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), IoError);
}

TEST_CASE("empty splits are rejected") {
    TrainConfig cfg;
    CHECK_THROWS_AS(train({}, {}, {2, 2}, cfg), ParameterError);
    const auto m = identity_2_2_2();
    CHECK_THROWS_AS(evaluate(m, {}), ParameterError);
}
