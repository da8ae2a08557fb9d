#pragma once

#include <array>
#include <vector>

#include "sddpg/numeric.hpp"
#include "sddpg/rng.hpp"

namespace sddpg {

// Plain dense actor with ReLU hidden layers and sigmoid outputs in [0,1]^2,
// the drop-in replacement for the spiking actor in the baseline runs.
struct DeepActorParams {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_size() const { return weights.front().cols; }
    int output_size() const { return weights.back().rows; }
};

DeepActorParams make_deep_actor(const std::vector<int>& layer_sizes, Rng& rng);

struct DeepActorTrace {
    std::vector<Vector> inputs;
    std::vector<Vector> preact;
    Vector output;
};

Vector deep_actor_forward(const DeepActorParams& params, const Vector& observation,
                          DeepActorTrace* trace = nullptr);

struct DeepActorGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
};

// Gradients of sum(action_grad . action) with respect to the parameters.
DeepActorGradients deep_actor_backward(const DeepActorParams& params, const DeepActorTrace& trace,
                                       const Vector& action_grad);

// Encode each channel to T Poisson spikes and decode back as the spike-count
// average, injecting exactly the spiking actor's input noise.
Vector poissonize_observation(const Vector& observation, int timesteps, Rng& rng);

}  // namespace sddpg
