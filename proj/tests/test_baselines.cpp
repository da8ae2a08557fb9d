#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sddpg/baselines.hpp"

using namespace sddpg;

TEST_CASE("deep_actor_forward: zero parameters squash to (0.5, 0.5)") {
    DeepActorParams p;
    p.weights = {Matrix(8, 6), Matrix(2, 8)};
    p.biases = {Vector(8, 0.0), Vector(2, 0.0)};
    const auto a = deep_actor_forward(p, Vector(6, 0.7));
    CHECK(a[0] == doctest::Approx(0.5));
    CHECK(a[1] == doctest::Approx(0.5));
}

TEST_CASE("deep_actor_forward: outputs always strictly inside (0,1)") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = make_deep_actor({6, 12, 2}, rng);
        for (auto& w : p.weights)
            for (double& x : w.data) x *= 10.0;
        Vector obs(6);
        for (double& x : obs) x = rng.uniform();
        const auto a = deep_actor_forward(p, obs);
        for (double v : a) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("deep_actor_forward: matches an independent matrix evaluation") {
    Rng rng(2);
    const auto p = make_deep_actor({4, 6, 2}, rng);
    Vector obs = {0.2, 0.9, 0.4, 0.1};

    // hand evaluation
    Vector h(6, 0.0);
    for (int i = 0; i < 6; ++i) {
        double s = p.biases[0][i];
        for (int j = 0; j < 4; ++j) s += p.weights[0](i, j) * obs[j];
        h[i] = std::max(0.0, s);
    }
    Vector out(2, 0.0);
    for (int i = 0; i < 2; ++i) {
        double s = p.biases[1][i];
        for (int j = 0; j < 6; ++j) s += p.weights[1](i, j) * h[j];
        out[i] = 1.0 / (1.0 + std::exp(-s));
    }

    const auto a = deep_actor_forward(p, obs);
    CHECK(a[0] == doctest::Approx(out[0]).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(out[1]).epsilon(1e-12));
}

TEST_CASE("deep_actor_backward: matches central finite differences") {
    Rng rng(3);
    auto p = make_deep_actor({5, 9, 2}, rng);
    for (double& x : p.weights.back().data) x = rng.uniform(-0.5, 0.5);
    Vector obs(5);
    for (double& x : obs) x = rng.uniform();
    const Vector upstream = {0.7, -1.3};

    DeepActorTrace trace;
    deep_actor_forward(p, obs, &trace);
    const auto g = deep_actor_backward(p, trace, upstream);

    const double h = 1e-6;
    auto loss = [&]() {
        const auto a = deep_actor_forward(p, obs);
        return upstream[0] * a[0] + upstream[1] * a[1];
    };
    for (int k = 0; k < p.layer_count(); ++k)
        for (std::size_t i = 0; i < p.weights[k].size(); i += 5) {
            const double orig = p.weights[k].data[i];
            p.weights[k].data[i] = orig + h;
            const double up = loss();
            p.weights[k].data[i] = orig - h;
            const double down = loss();
            p.weights[k].data[i] = orig;
            const double fd = (up - down) / (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(g.weights[k].data[i]), 1e-8});
            CHECK(std::abs(fd - g.weights[k].data[i]) / denom < 1e-4);
        }
}

TEST_CASE("poissonize_observation: degenerate probabilities and quantization") {
    Rng rng(4);
    const auto out = poissonize_observation({0.0, 1.0, 0.5}, 10, rng);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 1.0);
    CHECK(std::abs(out[2] * 10 - std::round(out[2] * 10)) < 1e-12);
}

TEST_CASE("poissonize_observation: mean concentrates around p") {
    Rng rng(5);
    const double p = 0.3;
    double total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) total += poissonize_observation({p}, 1, rng)[0];
    const double sigma = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(total / draws - p) < 3 * sigma + 1e-9);
}

TEST_CASE("poissonize_observation: large T converges to the identity") {
    Rng rng(6);
    const Vector obs = {0.25, 0.75, 0.5};
    const auto out = poissonize_observation(obs, 200000, rng);
    for (std::size_t i = 0; i < obs.size(); ++i) CHECK(std::abs(out[i] - obs[i]) < 0.01);
}

TEST_CASE("poissonize_observation: rejects channels outside [0,1]") {
    Rng rng(7);
    CHECK_THROWS_AS(poissonize_observation({1.4}, 5, rng), std::invalid_argument);
}
