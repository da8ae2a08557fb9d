#pragma once

#include "sddpg/critic.hpp"
#include "sddpg/numeric.hpp"
#include "sddpg/san.hpp"

namespace sddpg {

// Rectangular surrogate for the spike nonlinearity:
//   z(v) = amplifier if |v - v_th| < window, else 0.
struct PseudoGradConfig {
    double amplifier = 1.0;  // a1
    double window = 0.5;     // a2

    void validate() const;
};

Vector pseudo_grad(const Vector& voltage, const PseudoGradConfig& cfg, double v_th);

struct SanGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    void add(const SanGradients& other);
    void scale(double s);
};

SanGradients zero_gradients(const SanParams& params);

// Reading of the current adjoint recurrence for t < T. `same_step` is the
// exact reverse-mode rule dc(t) <- dv(t) + d_c dc(t+1) (current at t feeds
// voltage at t); `paper_literal` keeps the printed dv(t+1) + d_c dc(t+1)
// variant for reproduction.
enum class CurrentAdjoint { same_step, paper_literal };

// Backward pass through the unrolled spiking forward graph. Spike derivative
// is the rectangular surrogate; the (1 - o) reset gate is treated as a
// constant. Produces dL/dW and dL/db given dL/dAction.
SanGradients san_backward(const ForwardTrace& trace, const SanParams& params,
                          const Vector& action_grad, const LifConfig& cfg,
                          const PseudoGradConfig& pg,
                          CurrentAdjoint rule = CurrentAdjoint::same_step);

// dL/dAction with L = -Q, obtained by backpropagating through every critic
// layer above the action injection point.
Vector action_grad(const CriticParams& critic, const Vector& state, const Vector& action);

}  // namespace sddpg
