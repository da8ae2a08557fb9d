#include "sddpg/stbp.hpp"

#include <cmath>
#include <stdexcept>

namespace sddpg {

void PseudoGradConfig::validate() const {
    if (!(amplifier > 0.0)) throw std::invalid_argument("PseudoGradConfig: amplifier must be > 0");
    if (!(window > 0.0)) throw std::invalid_argument("PseudoGradConfig: window must be > 0");
}

Vector pseudo_grad(const Vector& voltage, const PseudoGradConfig& cfg, double v_th) {
    Vector z(voltage.size());
    for (std::size_t i = 0; i < voltage.size(); ++i)
        z[i] = std::abs(voltage[i] - v_th) < cfg.window ? cfg.amplifier : 0.0;
    return z;
}

SanGradients zero_gradients(const SanParams& params) {
    SanGradients g;
    for (const auto& w : params.weights) g.weights.emplace_back(w.rows, w.cols);
    for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
    return g;
}

void SanGradients::add(const SanGradients& other) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        for (std::size_t i = 0; i < weights[k].size(); ++i)
            weights[k].data[i] += other.weights[k].data[i];
        for (std::size_t i = 0; i < biases[k].size(); ++i) biases[k][i] += other.biases[k][i];
    }
}

void SanGradients::scale(double s) {
    for (auto& w : weights)
        for (double& x : w.data) x *= s;
    for (auto& b : biases)
        for (double& x : b) x *= s;
}

SanGradients san_backward(const ForwardTrace& trace, const SanParams& params,
                          const Vector& action_grad, const LifConfig& cfg,
                          const PseudoGradConfig& pg, CurrentAdjoint rule) {
    const int layers = params.layer_count();
    const int timesteps = cfg.timesteps;
    if (static_cast<int>(trace.states.size()) != timesteps)
        throw std::invalid_argument("san_backward: trace length does not match cfg.timesteps");
    if (static_cast<int>(action_grad.size()) != params.output_size())
        throw std::invalid_argument("san_backward: action gradient size mismatch");
    for (int t = 0; t < timesteps; ++t)
        if (static_cast<int>(trace.states[t].size()) != layers)
            throw std::invalid_argument("san_backward: trace layer count mismatch");

    SanGradients grads = zero_gradients(params);

    // dL/dSpikeCount = dL/dAction / T, identical at every timestep since
    // SpikeCount is a plain sum of output spikes.
    Vector spike_count_grad(action_grad.size());
    for (std::size_t i = 0; i < action_grad.size(); ++i)
        spike_count_grad[i] = action_grad[i] / timesteps;

    std::vector<Vector> future_v(layers), future_c(layers);

    for (int t = timesteps - 1; t >= 0; --t) {
        const bool last_step = (t == timesteps - 1);
        Vector grad_o = spike_count_grad;  // output-layer spike adjoint
        std::vector<Vector> cur_v(layers), cur_c(layers);

        for (int k = layers - 1; k >= 0; --k) {
            const LayerState& st = trace.states[t][k];
            const Vector z = pseudo_grad(st.voltage, pg, cfg.v_th);

            Vector grad_v(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                grad_v[i] = z[i] * grad_o[i];
                if (!last_step) {
                    const double gate = st.spikes[i] ? 0.0 : 1.0;
                    grad_v[i] += cfg.voltage_decay * gate * future_v[k][i];
                }
            }

            Vector grad_c(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (rule == CurrentAdjoint::same_step || last_step)
                    grad_c[i] = grad_v[i];
                else
                    grad_c[i] = future_v[k][i];
                if (!last_step) grad_c[i] += cfg.current_decay * future_c[k][i];
            }

            const std::uint8_t* in_spikes =
                (k == 0) ? trace.input.step(t) : trace.states[t][k - 1].spikes.data();
            outer_spikes_add(grads.weights[k], grad_c.data(), in_spikes);
            for (std::size_t i = 0; i < grad_c.size(); ++i) grads.biases[k][i] += grad_c[i];

            if (k > 0) {
                grad_o.assign(params.weights[k].cols, 0.0);
                matvec_transposed(params.weights[k], grad_c.data(), grad_o.data());
            }
            cur_v[k] = std::move(grad_v);
            cur_c[k] = std::move(grad_c);
        }
        future_v = std::move(cur_v);
        future_c = std::move(cur_c);
    }
    return grads;
}

Vector action_grad(const CriticParams& critic, const Vector& state, const Vector& action) {
    CriticTrace trace;
    critic_forward(critic, state, action, &trace);
    CriticGradients g = critic_backward(critic, trace, -1.0);
    return g.action;
}

}  // namespace sddpg
