#include "sddpg/critic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sddpg/parallel.hpp"

namespace sddpg {

void CriticConfig::validate() const {
    if (state_dim < 1 || action_dim < 1) throw std::invalid_argument("CriticConfig: bad dims");
    if (hidden.empty()) throw std::invalid_argument("CriticConfig: need at least one hidden layer");
    if (action_layer < 0 || action_layer > static_cast<int>(hidden.size()))
        throw std::invalid_argument("CriticConfig: action_layer out of range");
}

void CriticParams::validate() const {
    config.validate();
    if (weights.size() != biases.size() || weights.size() != config.hidden.size() + 1)
        throw std::invalid_argument("CriticParams: layer count mismatch");
    for (std::size_t k = 0; k < weights.size(); ++k)
        if (weights[k].rows != static_cast<int>(biases[k].size()))
            throw std::invalid_argument("CriticParams: bias mismatch at layer " + std::to_string(k));
}

namespace {

// Input width of layer k, including the action where it is injected.
int layer_input_size(const CriticConfig& cfg, int k) {
    int base = (k == 0) ? cfg.state_dim : cfg.hidden[k - 1];
    if (k == cfg.action_layer) base += cfg.action_dim;
    return base;
}

int layer_output_size(const CriticConfig& cfg, int k) {
    return (k == static_cast<int>(cfg.hidden.size())) ? 1 : cfg.hidden[k];
}

}  // namespace

CriticParams make_critic(const CriticConfig& cfg, Rng& rng) {
    cfg.validate();
    CriticParams p;
    p.config = cfg;
    const int layers = static_cast<int>(cfg.hidden.size()) + 1;
    for (int k = 0; k < layers; ++k) {
        const int in = layer_input_size(cfg, k);
        const int out = layer_output_size(cfg, k);
        // DDPG-style init: fan-in uniform for hidden layers, small uniform for
        // the output layer so initial Q estimates start near zero.
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

double critic_forward(const CriticParams& params, const Vector& state, const Vector& action,
                      CriticTrace* trace) {
    const CriticConfig& cfg = params.config;
    if (static_cast<int>(state.size()) != cfg.state_dim)
        throw std::invalid_argument("critic_forward: state dimension mismatch");
    if (static_cast<int>(action.size()) != cfg.action_dim)
        throw std::invalid_argument("critic_forward: action dimension mismatch");

    const int layers = params.layer_count();
    if (trace) {
        trace->inputs.assign(layers, {});
        trace->preact.assign(layers, {});
    }

    Vector act = state;
    for (int k = 0; k < layers; ++k) {
        if (k == cfg.action_layer) act.insert(act.end(), action.begin(), action.end());
        Vector pre(params.weights[k].rows);
        matvec(params.weights[k], act.data(), pre.data());
        for (int i = 0; i < params.weights[k].rows; ++i) pre[i] += params.biases[k][i];
        if (trace) {
            trace->inputs[k] = act;
            trace->preact[k] = pre;
        }
        if (k == layers - 1) {
            act = pre;  // linear output
        } else {
            for (double& x : pre) x = x > 0.0 ? x : 0.0;
            act = std::move(pre);
        }
    }
    return act[0];
}

CriticGradients critic_backward(const CriticParams& params, const CriticTrace& trace,
                                double upstream) {
    const CriticConfig& cfg = params.config;
    const int layers = params.layer_count();
    if (static_cast<int>(trace.inputs.size()) != layers)
        throw std::invalid_argument("critic_backward: trace does not match network depth");

    CriticGradients g;
    for (const auto& w : params.weights) g.weights.emplace_back(w.rows, w.cols);
    for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);

    Vector delta = {upstream};
    for (int k = layers - 1; k >= 0; --k) {
        if (k < layers - 1) {
            // delta currently holds d(post_k); gate by ReLU derivative.
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (trace.preact[k][i] <= 0.0) delta[i] = 0.0;
        }
        outer_add(g.weights[k], delta.data(), trace.inputs[k].data());
        for (std::size_t i = 0; i < delta.size(); ++i) g.biases[k][i] += delta[i];

        Vector din(params.weights[k].cols);
        matvec_transposed(params.weights[k], delta.data(), din.data());
        if (k == cfg.action_layer) {
            const int split = static_cast<int>(din.size()) - cfg.action_dim;
            g.action.assign(din.begin() + split, din.end());
            din.resize(split);
        }
        delta = std::move(din);
    }
    g.state = std::move(delta);  // action part was already peeled at its layer
    return g;
}

double critic_train_step(CriticParams& params, const CriticParams& target,
                         std::span<const Transition> batch,
                         std::span<const std::array<double, 2>> next_actions, double gamma,
                         Optimizer& opt, bool timeout_bootstraps, bool parallel) {
    if (batch.empty()) throw std::invalid_argument("critic_train_step: empty batch");
    if (next_actions.size() != batch.size())
        throw std::invalid_argument("critic_train_step: next_actions size mismatch");

    const int n = static_cast<int>(batch.size());
    const double inv_n = 1.0 / n;

    std::vector<Matrix> grad_w;
    std::vector<Vector> grad_b;
    for (const auto& w : params.weights) grad_w.emplace_back(w.rows, w.cols);
    for (const auto& b : params.biases) grad_b.emplace_back(b.size(), 0.0);

    double loss = 0.0;

    // Items are processed in fixed-size chunks: the per-item passes run in
    // parallel, the reduction walks items in index order so results do not
    // depend on the thread count.
    const int chunk = 16;
    std::vector<CriticGradients> slot(std::min(chunk, n));
    std::vector<double> slot_loss(std::min(chunk, n), 0.0);
    for (int base = 0; base < n; base += chunk) {
        const int count = std::min(chunk, n - base);
        parallel_for(count, parallel, [&](int j) {
            const Transition& tr = batch[base + j];
            double y = tr.reward;
            const bool bootstrap =
                !tr.env_terminal() && !(tr.cause == TerminalCause::timeout && !timeout_bootstraps);
            if (bootstrap) {
                const Vector next_action(next_actions[base + j].begin(),
                                         next_actions[base + j].end());
                y += gamma * critic_forward(target, tr.next_state, next_action);
            }
            CriticTrace trace;
            const Vector action(tr.action.begin(), tr.action.end());
            const double q = critic_forward(params, tr.state, action, &trace);
            const double err = q - y;
            slot_loss[j] = err * err;
            slot[j] = critic_backward(params, trace, 2.0 * err * inv_n);
        });
        for (int j = 0; j < count; ++j) {
            loss += slot_loss[j];
            for (std::size_t k = 0; k < grad_w.size(); ++k) {
                for (std::size_t i = 0; i < grad_w[k].size(); ++i)
                    grad_w[k].data[i] += slot[j].weights[k].data[i];
                for (std::size_t i = 0; i < grad_b[k].size(); ++i)
                    grad_b[k][i] += slot[j].biases[k][i];
            }
        }
    }

    opt.apply(params.weights, params.biases, grad_w, grad_b);
    return loss * inv_n;
}

}  // namespace sddpg
