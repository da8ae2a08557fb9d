#pragma once

#include <vector>

#include "sddpg/numeric.hpp"
#include "sddpg/rng.hpp"

namespace sddpg {

// Two-state LIF neuron parameters shared by every layer of the spiking actor.
struct LifConfig {
    double v_th = 0.5;           // firing threshold, fires when v > v_th
    double current_decay = 0.5;  // d_c
    double voltage_decay = 0.75; // d_v
    int timesteps = 5;           // T, forward-propagation window

    void validate() const;
};

// Weights and biases of the spiking actor network, one affine map per layer.
struct SanParams {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_size() const { return weights.front().cols; }
    int output_size() const { return weights.back().rows; }
    std::vector<int> layer_sizes() const;
    void validate() const;
};

// Uniform init in +-1/sqrt(fan_in) for weights and biases.
SanParams make_san(const std::vector<int>& layer_sizes, Rng& rng);

// Per-layer state at one timestep. The stored voltage is the pre-reset value
// (the one compared against the threshold); the reset itself is realized by
// the (1 - o) gate applied to the decay term of the next step.
struct LayerState {
    Vector current;
    Vector voltage;
    SpikeVector spikes;

    explicit LayerState(int n = 0) : current(n, 0.0), voltage(n, 0.0), spikes(n, 0) {}
};

// Binary input spike train, timesteps x channels, row per step.
struct SpikeTrain {
    int timesteps = 0;
    int channels = 0;
    SpikeVector bits;

    SpikeTrain() = default;
    SpikeTrain(int t, int c) : timesteps(t), channels(c), bits(static_cast<std::size_t>(t) * c, 0) {}

    std::uint8_t at(int t, int ch) const { return bits[static_cast<std::size_t>(t) * channels + ch]; }
    std::uint8_t* step(int t) { return bits.data() + static_cast<std::size_t>(t) * channels; }
    const std::uint8_t* step(int t) const {
        return bits.data() + static_cast<std::size_t>(t) * channels;
    }
};

// Everything the backward pass needs: input spikes plus per-timestep,
// per-layer currents, voltages and spike outputs, and the output spike count.
struct ForwardTrace {
    SpikeTrain input;
    std::vector<std::vector<LayerState>> states;  // [t][k]
    Vector spike_count;
};

// Rate-encode a normalized observation into Bernoulli spikes, one draw per
// channel per timestep with p equal to the channel value.
SpikeTrain poisson_encode(const Vector& state, int timesteps, Rng& rng);

// One LIF layer update:
//   c(t) = d_c c(t-1) + W o_in + b
//   v(t) = d_v v(t-1) (1 - o(t-1)) + c(t)
//   o(t) = 1 where v(t) > v_th
LayerState lif_layer_step(const LayerState& prev, const std::uint8_t* input_spikes,
                          const Matrix& w, const Vector& b, const LifConfig& cfg);

struct SanForward {
    ForwardTrace trace;
    Vector action;  // spike_count / T, entries in [0,1]
};

// Full forward pass retaining the trace for the backward pass.
SanForward san_forward(const SanParams& params, const SpikeTrain& train, const LifConfig& cfg);

// Forward pass without trace retention, for rollouts and deployment checks.
Vector san_infer(const SanParams& params, const SpikeTrain& train, const LifConfig& cfg);

struct WheelSpeeds {
    double left = 0.0;
    double right = 0.0;
};

// Action[i] * (v_max - v_min) + v_min per wheel.
WheelSpeeds decode_action(const Vector& action, double v_min, double v_max);

}  // namespace sddpg
