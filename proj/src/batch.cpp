#include "sddpg/batch.hpp"

#include <algorithm>
#include <cmath>

#include "sddpg/parallel.hpp"

namespace sddpg {

namespace {

constexpr std::uint64_t kActTag = 0x61637400;     // per-kernel stream tags
constexpr std::uint64_t kUpdateTag = 0x75706400;

double l2_norm(const SanGradients& g) {
    double sum = 0.0;
    for (const auto& w : g.weights)
        for (double x : w.data) sum += x * x;
    for (const auto& b : g.biases)
        for (double x : b) sum += x * x;
    return std::sqrt(sum);
}

double l2_norm(const DeepActorGradients& g) {
    double sum = 0.0;
    for (const auto& w : g.weights)
        for (double x : w.data) sum += x * x;
    for (const auto& b : g.biases)
        for (double x : b) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

std::vector<std::array<double, 2>> batch_san_act(const SanParams& params,
                                                 std::span<const Vector> states,
                                                 const LifConfig& cfg, std::uint64_t stream_seed,
                                                 bool parallel) {
    const int n = static_cast<int>(states.size());
    std::vector<std::array<double, 2>> actions(n);
    parallel_for(n, parallel, [&](int i) {
        Rng rng(Rng::mix(stream_seed, kActTag, static_cast<std::uint64_t>(i)));
        const auto train = poisson_encode(states[i], cfg.timesteps, rng);
        const auto a = san_infer(params, train, cfg);
        actions[i] = {a[0], a[1]};
    });
    return actions;
}

ActorBatchGrads batch_san_update_grads(const SanParams& actor, const CriticParams& critic,
                                       std::span<const Vector> states, const LifConfig& cfg,
                                       const PseudoGradConfig& pg, CurrentAdjoint rule,
                                       std::uint64_t stream_seed, bool parallel) {
    const int n = static_cast<int>(states.size());
    ActorBatchGrads out;
    out.grads = zero_gradients(actor);

    const int chunk = 16;
    std::vector<SanGradients> slot(std::min(chunk, n));
    std::vector<double> slot_q(std::min(chunk, n), 0.0);
    for (int base = 0; base < n; base += chunk) {
        const int count = std::min(chunk, n - base);
        parallel_for(count, parallel, [&](int j) {
            const int i = base + j;
            Rng rng(Rng::mix(stream_seed, kUpdateTag, static_cast<std::uint64_t>(i)));
            const auto train = poisson_encode(states[i], cfg.timesteps, rng);
            const auto fwd = san_forward(actor, train, cfg);
            slot_q[j] = critic_forward(critic, states[i], fwd.action);
            const auto ga = action_grad(critic, states[i], fwd.action);
            slot[j] = san_backward(fwd.trace, actor, ga, cfg, pg, rule);
        });
        for (int j = 0; j < count; ++j) {
            out.grads.add(slot[j]);
            out.mean_q += slot_q[j];
        }
    }
    out.grads.scale(1.0 / n);
    out.mean_q /= n;
    out.grad_norm = l2_norm(out.grads);
    return out;
}

DeepBatchGrads batch_deep_update_grads(const DeepActorParams& actor, const CriticParams& critic,
                                       std::span<const Vector> states, int poisson_timesteps,
                                       std::uint64_t stream_seed, bool parallel) {
    const int n = static_cast<int>(states.size());
    DeepBatchGrads out;
    for (const auto& w : actor.weights) out.grads.weights.emplace_back(w.rows, w.cols);
    for (const auto& b : actor.biases) out.grads.biases.emplace_back(b.size(), 0.0);

    const int chunk = 16;
    std::vector<DeepActorGradients> slot(std::min(chunk, n));
    std::vector<double> slot_q(std::min(chunk, n), 0.0);
    for (int base = 0; base < n; base += chunk) {
        const int count = std::min(chunk, n - base);
        parallel_for(count, parallel, [&](int j) {
            const int i = base + j;
            Rng rng(Rng::mix(stream_seed, kUpdateTag, static_cast<std::uint64_t>(i)));
            Vector in = states[i];
            if (poisson_timesteps > 0) in = poissonize_observation(in, poisson_timesteps, rng);
            DeepActorTrace trace;
            const auto action = deep_actor_forward(actor, in, &trace);
            slot_q[j] = critic_forward(critic, states[i], action);
            const auto ga = action_grad(critic, states[i], action);
            slot[j] = deep_actor_backward(actor, trace, ga);
        });
        for (int j = 0; j < count; ++j) {
            for (std::size_t k = 0; k < out.grads.weights.size(); ++k) {
                for (std::size_t x = 0; x < out.grads.weights[k].size(); ++x)
                    out.grads.weights[k].data[x] += slot[j].weights[k].data[x];
                for (std::size_t x = 0; x < out.grads.biases[k].size(); ++x)
                    out.grads.biases[k][x] += slot[j].biases[k][x];
            }
            out.mean_q += slot_q[j];
        }
    }
    const double inv_n = 1.0 / n;
    for (auto& w : out.grads.weights)
        for (double& x : w.data) x *= inv_n;
    for (auto& b : out.grads.biases)
        for (double& x : b) x *= inv_n;
    out.mean_q *= inv_n;
    out.grad_norm = l2_norm(out.grads);
    return out;
}

std::vector<std::array<double, 2>> batch_deep_act(const DeepActorParams& params,
                                                  std::span<const Vector> states,
                                                  int poisson_timesteps,
                                                  std::uint64_t stream_seed, bool parallel) {
    const int n = static_cast<int>(states.size());
    std::vector<std::array<double, 2>> actions(n);
    parallel_for(n, parallel, [&](int i) {
        Rng rng(Rng::mix(stream_seed, kActTag, static_cast<std::uint64_t>(i)));
        Vector in = states[i];
        if (poisson_timesteps > 0) in = poissonize_observation(in, poisson_timesteps, rng);
        const auto a = deep_actor_forward(params, in);
        actions[i] = {a[0], a[1]};
    });
    return actions;
}

}  // namespace sddpg
