#include "sddpg/san.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sddpg {

void LifConfig::validate() const {
    if (!(v_th > 0.0)) throw std::invalid_argument("LifConfig: v_th must be positive");
    if (current_decay < 0.0 || current_decay > 1.0)
        throw std::invalid_argument("LifConfig: current decay must be in [0,1]");
    if (voltage_decay < 0.0 || voltage_decay > 1.0)
        throw std::invalid_argument("LifConfig: voltage decay must be in [0,1]");
    if (timesteps < 1) throw std::invalid_argument("LifConfig: timesteps must be >= 1");
}

std::vector<int> SanParams::layer_sizes() const {
    std::vector<int> sizes;
    sizes.push_back(weights.front().cols);
    for (const auto& w : weights) sizes.push_back(w.rows);
    return sizes;
}

void SanParams::validate() const {
    if (weights.empty() || weights.size() != biases.size())
        throw std::invalid_argument("SanParams: need one weight matrix and bias per layer");
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k].rows != static_cast<int>(biases[k].size()))
            throw std::invalid_argument("SanParams: bias size mismatch at layer " + std::to_string(k));
        if (k > 0 && weights[k].cols != weights[k - 1].rows)
            throw std::invalid_argument("SanParams: shape chain broken at layer " + std::to_string(k));
        if (!all_finite(weights[k]) || !all_finite(biases[k]))
            throw std::invalid_argument("SanParams: non-finite parameter at layer " + std::to_string(k));
    }
}

SanParams make_san(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("make_san: need at least two layer sizes");
    SanParams p;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        const int fan_in = layer_sizes[k];
        const int fan_out = layer_sizes[k + 1];
        const double lim = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_out, fan_in);
        for (double& x : w.data) x = rng.uniform(-lim, lim);
        // Nonnegative bias init: the bias-driven resting voltage lands inside
        // the surrogate window (0, v_th], so fresh and momentarily silent
        // neurons still pass gradient instead of freezing at z(v) = 0.
        Vector b(fan_out);
        for (double& x : b) x = rng.uniform(0.0, lim);
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

SpikeTrain poisson_encode(const Vector& state, int timesteps, Rng& rng) {
    if (timesteps < 1) throw std::invalid_argument("poisson_encode: timesteps must be >= 1");
    for (double p : state)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("poisson_encode: channel value outside [0,1]");
    SpikeTrain train(timesteps, static_cast<int>(state.size()));
    for (int t = 0; t < timesteps; ++t) {
        std::uint8_t* row = train.step(t);
        for (std::size_t ch = 0; ch < state.size(); ++ch)
            row[ch] = rng.bernoulli(state[ch]) ? 1 : 0;
    }
    return train;
}

LayerState lif_layer_step(const LayerState& prev, const std::uint8_t* input_spikes,
                          const Matrix& w, const Vector& b, const LifConfig& cfg) {
    const int n = w.rows;
    LayerState next(n);
    for (int i = 0; i < n; ++i) next.current[i] = cfg.current_decay * prev.current[i] + b[i];
    matvec_spikes_add(w, input_spikes, next.current.data());
    for (int i = 0; i < n; ++i) {
        const double gate = prev.spikes[i] ? 0.0 : 1.0;
        const double v = cfg.voltage_decay * prev.voltage[i] * gate + next.current[i];
        if (!std::isfinite(v)) throw std::runtime_error("lif_layer_step: non-finite voltage");
        next.voltage[i] = v;
        next.spikes[i] = v > cfg.v_th ? 1 : 0;
    }
    return next;
}

namespace {

Vector run_san(const SanParams& params, const SpikeTrain& train, const LifConfig& cfg,
               ForwardTrace* trace) {
    const int layers = params.layer_count();
    if (train.timesteps != cfg.timesteps)
        throw std::invalid_argument("san forward: spike train length must equal cfg.timesteps");
    if (train.channels != params.input_size())
        throw std::invalid_argument("san forward: spike train channel count mismatch");

    std::vector<LayerState> state;
    state.reserve(layers);
    for (int k = 0; k < layers; ++k) state.emplace_back(params.weights[k].rows);

    Vector spike_count(params.output_size(), 0.0);
    if (trace) {
        trace->input = train;
        trace->states.assign(cfg.timesteps, {});
    }

    for (int t = 0; t < cfg.timesteps; ++t) {
        const std::uint8_t* in = train.step(t);
        for (int k = 0; k < layers; ++k) {
            state[k] = lif_layer_step(state[k], in, params.weights[k], params.biases[k], cfg);
            in = state[k].spikes.data();
        }
        for (int i = 0; i < params.output_size(); ++i) spike_count[i] += state[layers - 1].spikes[i];
        if (trace) trace->states[t] = state;
    }
    if (trace) trace->spike_count = spike_count;

    Vector action(spike_count.size());
    for (std::size_t i = 0; i < action.size(); ++i) action[i] = spike_count[i] / cfg.timesteps;
    return action;
}

}  // namespace

SanForward san_forward(const SanParams& params, const SpikeTrain& train, const LifConfig& cfg) {
    SanForward out;
    out.action = run_san(params, train, cfg, &out.trace);
    return out;
}

Vector san_infer(const SanParams& params, const SpikeTrain& train, const LifConfig& cfg) {
    return run_san(params, train, cfg, nullptr);
}

WheelSpeeds decode_action(const Vector& action, double v_min, double v_max) {
    if (!(v_min < v_max)) throw std::invalid_argument("decode_action: v_min must be below v_max");
    if (action.size() != 2) throw std::invalid_argument("decode_action: expected a 2-vector action");
    for (double a : action)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("decode_action: action entries must lie in [0,1]");
    WheelSpeeds ws;
    ws.left = action[0] * (v_max - v_min) + v_min;
    ws.right = action[1] * (v_max - v_min) + v_min;
    return ws;
}

}  // namespace sddpg
