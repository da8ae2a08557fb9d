#pragma once

#include <span>
#include <vector>

#include "sddpg/numeric.hpp"
#include "sddpg/optim.hpp"
#include "sddpg/rng.hpp"
#include "sddpg/transition.hpp"

namespace sddpg {

// Dense Q-network layout. The action vector is concatenated to the input of
// layer `action_layer` (0-based), hidden layers are ReLU, output is linear.
struct CriticConfig {
    int state_dim = 24;
    int action_dim = 2;
    std::vector<int> hidden = {512, 512};
    int action_layer = 1;

    void validate() const;
};

struct CriticParams {
    CriticConfig config;
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    int layer_count() const { return static_cast<int>(weights.size()); }
    void validate() const;
};

CriticParams make_critic(const CriticConfig& cfg, Rng& rng);

// Layer inputs (post concat) and pre-activations kept for the backward pass.
struct CriticTrace {
    std::vector<Vector> inputs;
    std::vector<Vector> preact;
};

double critic_forward(const CriticParams& params, const Vector& state, const Vector& action,
                      CriticTrace* trace = nullptr);

struct CriticGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    Vector state;
    Vector action;
};

// Gradients of upstream * Q with respect to parameters, state, and action.
CriticGradients critic_backward(const CriticParams& params, const CriticTrace& trace,
                                double upstream);

// One mean-squared TD-error step:
//   y_i = r_i + gamma * Q_target(s'_i, a'_i)   (bootstrap masked on terminals)
//   loss = mean((y_i - Q(s_i, a_i))^2)
// `next_actions` are the target-actor actions for each batch item. Returns
// the loss before the parameter update.
double critic_train_step(CriticParams& params, const CriticParams& target,
                         std::span<const Transition> batch,
                         std::span<const std::array<double, 2>> next_actions, double gamma,
                         Optimizer& opt, bool timeout_bootstraps = true, bool parallel = false);

}  // namespace sddpg
