#include "sddpg/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace sddpg {

DeepActorParams make_deep_actor(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("make_deep_actor: need at least two layer sizes");
    DeepActorParams p;
    const int layers = static_cast<int>(layer_sizes.size()) - 1;
    for (int k = 0; k < layers; ++k) {
        const int in = layer_sizes[k];
        const int out = layer_sizes[k + 1];
        const double lim = (k == layers - 1) ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(in));
        Matrix w(out, in);
        for (double& x : w.data) x = rng.uniform(-lim, lim);
        Vector b(out);
        for (double& x : b) x = rng.uniform(-lim, lim);
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

Vector deep_actor_forward(const DeepActorParams& params, const Vector& observation,
                          DeepActorTrace* trace) {
    if (static_cast<int>(observation.size()) != params.input_size())
        throw std::invalid_argument("deep_actor_forward: observation size mismatch");
    const int layers = params.layer_count();
    if (trace) {
        trace->inputs.assign(layers, {});
        trace->preact.assign(layers, {});
    }
    Vector act = observation;
    for (int k = 0; k < layers; ++k) {
        Vector pre(params.weights[k].rows);
        matvec(params.weights[k], act.data(), pre.data());
        for (int i = 0; i < params.weights[k].rows; ++i) pre[i] += params.biases[k][i];
        if (trace) {
            trace->inputs[k] = act;
            trace->preact[k] = pre;
        }
        if (k == layers - 1) {
            for (double& x : pre) x = 1.0 / (1.0 + std::exp(-x));
        } else {
            for (double& x : pre) x = x > 0.0 ? x : 0.0;
        }
        act = std::move(pre);
    }
    if (trace) trace->output = act;
    return act;
}

DeepActorGradients deep_actor_backward(const DeepActorParams& params, const DeepActorTrace& trace,
                                       const Vector& action_grad) {
    const int layers = params.layer_count();
    DeepActorGradients g;
    for (const auto& w : params.weights) g.weights.emplace_back(w.rows, w.cols);
    for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);

    // sigmoid output: d(out)/d(pre) = out (1 - out)
    Vector delta(action_grad.size());
    for (std::size_t i = 0; i < delta.size(); ++i)
        delta[i] = action_grad[i] * trace.output[i] * (1.0 - trace.output[i]);

    for (int k = layers - 1; k >= 0; --k) {
        if (k < layers - 1)
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (trace.preact[k][i] <= 0.0) delta[i] = 0.0;
        outer_add(g.weights[k], delta.data(), trace.inputs[k].data());
        for (std::size_t i = 0; i < delta.size(); ++i) g.biases[k][i] += delta[i];
        if (k > 0) {
            Vector din(params.weights[k].cols);
            matvec_transposed(params.weights[k], delta.data(), din.data());
            delta = std::move(din);
        }
    }
    return g;
}

Vector poissonize_observation(const Vector& observation, int timesteps, Rng& rng) {
    if (timesteps < 1) throw std::invalid_argument("poissonize_observation: timesteps < 1");
    Vector out(observation.size());
    for (std::size_t ch = 0; ch < observation.size(); ++ch) {
        const double p = observation[ch];
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("poissonize_observation: channel outside [0,1]");
        int count = 0;
        for (int t = 0; t < timesteps; ++t) count += rng.bernoulli(p) ? 1 : 0;
        out[ch] = static_cast<double>(count) / timesteps;
    }
    return out;
}

}  // namespace sddpg
