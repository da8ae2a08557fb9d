#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_tape.hpp"
#include "sddpg/stbp.hpp"

using namespace sddpg;

namespace {

struct Case {
    SanParams params;
    SpikeTrain train;
    LifConfig cfg;
};

Case random_case(std::uint64_t seed, const std::vector<int>& sizes, int timesteps) {
    Case c;
    Rng rng(seed);
    c.params = make_san(sizes, rng);
    for (auto& w : c.params.weights)
        for (double& x : w.data) x *= 3.0;  // enough drive to spike
    c.cfg.timesteps = timesteps;
    Vector probs(sizes.front());
    for (double& p : probs) p = rng.uniform();
    c.train = poisson_encode(probs, timesteps, rng);
    return c;
}

double max_abs_diff(const SanGradients& a, const oracle::TapeGradients& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.weights.size(); ++k) {
        for (std::size_t i = 0; i < a.weights[k].size(); ++i)
            m = std::max(m, std::abs(a.weights[k].data[i] - b.weights[k].data[i]));
        for (std::size_t i = 0; i < a.biases[k].size(); ++i)
            m = std::max(m, std::abs(a.biases[k][i] - b.biases[k][i]));
    }
    return m;
}

}  // namespace

TEST_CASE("pseudo_grad: rectangular window per Table I constants") {
    PseudoGradConfig pg;  // a1=1.0, a2=0.5
    const double v_th = 0.5;
    CHECK(pseudo_grad({0.5}, pg, v_th)[0] == 1.0);            // window center
    CHECK(pseudo_grad({1.0}, pg, v_th)[0] == 0.0);            // boundary excluded
    CHECK(pseudo_grad({0.0}, pg, v_th)[0] == 0.0);            // lower boundary excluded
    CHECK(pseudo_grad({0.99}, pg, v_th)[0] == 1.0);
    CHECK(pseudo_grad({1.01}, pg, v_th)[0] == 0.0);
    CHECK(pseudo_grad({0.49, 0.51, -0.01}, pg, v_th) == Vector{1.0, 1.0, 0.0});
}

TEST_CASE("san_backward: zero action gradient kills every parameter gradient") {
    auto c = random_case(1, {4, 6, 2}, 5);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    const auto g = san_backward(fwd.trace, c.params, {0.0, 0.0}, c.cfg, pg);
    for (const auto& w : g.weights)
        for (double x : w.data) CHECK(x == 0.0);
    for (const auto& b : g.biases)
        for (double x : b) CHECK(x == 0.0);
}

TEST_CASE("san_backward: T=1 degenerates to the last-step-only rules") {
    auto c = random_case(2, {3, 5, 2}, 1);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    const auto same = san_backward(fwd.trace, c.params, {0.7, -0.3}, c.cfg, pg,
                                   CurrentAdjoint::same_step);
    const auto paper = san_backward(fwd.trace, c.params, {0.7, -0.3}, c.cfg, pg,
                                    CurrentAdjoint::paper_literal);
    // With no future timestep the two adjoint readings coincide.
    CHECK(max_abs_diff(same, oracle::tape_backward(c.params, c.train, c.cfg, pg, {0.7, -0.3})) <=
          1e-12);
    for (std::size_t k = 0; k < same.weights.size(); ++k)
        for (std::size_t i = 0; i < same.weights[k].size(); ++i)
            CHECK(same.weights[k].data[i] == paper.weights[k].data[i]);
}

TEST_CASE("san_backward: equals the unrolled-tape oracle on random nets") {
    PseudoGradConfig pg;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int T = 1 + static_cast<int>(seed % 3) * 4;  // 1, 5, 9
        auto c = random_case(1000 + seed, {4, 6, 2}, T);
        const auto fwd = san_forward(c.params, c.train, c.cfg);
        Rng grng(seed);
        const Vector ga = {grng.uniform(-2.0, 2.0), grng.uniform(-2.0, 2.0)};
        const auto ours = san_backward(fwd.trace, c.params, ga, c.cfg, pg);
        const auto ref = oracle::tape_backward(c.params, c.train, c.cfg, pg, ga);
        CHECK(max_abs_diff(ours, ref) <= 1e-10);
    }
}

TEST_CASE("san_backward: linear in the action adjoint") {
    auto c = random_case(3, {4, 8, 2}, 6);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    const Vector g = {0.4, -1.1};
    const Vector g3 = {1.2, -3.3};
    const auto b1 = san_backward(fwd.trace, c.params, g, c.cfg, pg);
    const auto b3 = san_backward(fwd.trace, c.params, g3, c.cfg, pg);
    for (std::size_t k = 0; k < b1.weights.size(); ++k)
        for (std::size_t i = 0; i < b1.weights[k].size(); ++i)
            CHECK(b3.weights[k].data[i] == doctest::Approx(3.0 * b1.weights[k].data[i]).epsilon(1e-12));
}

TEST_CASE("san_backward: vanishing window annihilates sub-output gradients") {
    auto c = random_case(4, {4, 6, 3, 2}, 5);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    pg.window = 1e-300;  // z = 0 everywhere in practice
    const auto g = san_backward(fwd.trace, c.params, {1.0, 1.0}, c.cfg, pg);
    // Layers below the output accumulation see only paths through a spike
    // derivative, so their gradients vanish.
    for (int k = 0; k + 1 < c.params.layer_count(); ++k) {
        for (double x : g.weights[k].data) CHECK(x == 0.0);
        for (double x : g.biases[k]) CHECK(x == 0.0);
    }
}

TEST_CASE("san_backward: gradient shapes always mirror parameter shapes") {
    auto c = random_case(5, {5, 7, 4, 2}, 4);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    const auto g = san_backward(fwd.trace, c.params, {0.1, 0.2}, c.cfg, pg);
    REQUIRE(g.weights.size() == c.params.weights.size());
    for (std::size_t k = 0; k < g.weights.size(); ++k) {
        CHECK(g.weights[k].rows == c.params.weights[k].rows);
        CHECK(g.weights[k].cols == c.params.weights[k].cols);
        CHECK(g.biases[k].size() == c.params.biases[k].size());
    }
}

TEST_CASE("san_backward: paper-literal current adjoint is available and differs") {
    auto c = random_case(6, {4, 6, 2}, 6);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    const auto same = san_backward(fwd.trace, c.params, {1.0, -1.0}, c.cfg, pg,
                                   CurrentAdjoint::same_step);
    const auto paper = san_backward(fwd.trace, c.params, {1.0, -1.0}, c.cfg, pg,
                                    CurrentAdjoint::paper_literal);
    double diff = 0.0;
    for (std::size_t k = 0; k < same.weights.size(); ++k)
        for (std::size_t i = 0; i < same.weights[k].size(); ++i)
            diff = std::max(diff,
                            std::abs(same.weights[k].data[i] - paper.weights[k].data[i]));
    CHECK(diff > 0.0);  // the transcribed recurrence is a different operator
}

TEST_CASE("san_backward: rejects mismatched traces") {
    auto c = random_case(7, {4, 6, 2}, 5);
    const auto fwd = san_forward(c.params, c.train, c.cfg);
    PseudoGradConfig pg;
    LifConfig other = c.cfg;
    other.timesteps = 9;
    CHECK_THROWS_AS(san_backward(fwd.trace, c.params, {0.0, 0.0}, other, pg),
                    std::invalid_argument);
    CHECK_THROWS_AS(san_backward(fwd.trace, c.params, {0.0, 0.0, 0.0}, c.cfg, pg),
                    std::invalid_argument);
}

TEST_CASE("action_grad: constant critic yields zero action gradient") {
    CriticConfig cc;
    cc.state_dim = 4;
    cc.hidden = {8, 8};
    Rng rng(8);
    auto critic = make_critic(cc, rng);
    for (auto& w : critic.weights)
        for (double& x : w.data) x = 0.0;
    for (auto& b : critic.biases)
        for (double& x : b) x = 0.0;
    const auto g = action_grad(critic, Vector(4, 0.3), {0.5, 0.5});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("action_grad: single linear layer gives minus the action weights") {
    // Q = w_s . s + w_a . a  (action injected at layer 0, no hidden nonlinearity
    // reachable when weights beyond are identity-like). Build explicitly:
    CriticConfig cc;
    cc.state_dim = 2;
    cc.action_dim = 2;
    cc.hidden = {1};
    cc.action_layer = 0;
    CriticParams critic;
    critic.config = cc;
    Matrix w0(1, 4);
    w0(0, 0) = 0.0;
    w0(0, 1) = 0.0;
    w0(0, 2) = 1.5;   // action[0]
    w0(0, 3) = -2.0;  // action[1]
    Matrix w1(1, 1);
    w1(0, 0) = 1.0;
    critic.weights = {w0, w1};
    critic.biases = {Vector{5.0}, Vector{0.0}};  // keep ReLU active

    const auto g = action_grad(critic, {0.1, 0.1}, {0.2, 0.2});
    CHECK(g[0] == doctest::Approx(-1.5));
    CHECK(g[1] == doctest::Approx(2.0));
}

TEST_CASE("action_grad: matches central finite differences of -Q") {
    CriticConfig cc;
    cc.state_dim = 6;
    cc.hidden = {16, 16};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(300 + seed);
        auto critic = make_critic(cc, rng);
        Vector state(6);
        for (double& x : state) x = rng.uniform();
        Vector action = {rng.uniform(), rng.uniform()};

        const auto g = action_grad(critic, state, action);
        const double h = 1e-5;
        for (int d = 0; d < 2; ++d) {
            Vector ap = action, am = action;
            ap[d] += h;
            am[d] -= h;
            const double fd =
                -(critic_forward(critic, state, ap) - critic_forward(critic, state, am)) / (2 * h);
            CHECK(g[d] == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}
