#pragma once

#include <cstdint>
#include <vector>

#include "sddpg/numeric.hpp"

namespace sddpg {

enum class OptimizerKind { adam, sgd };

// Adaptive-moment state mirroring a weights/biases parameter set.
struct AdamState {
    std::vector<Matrix> m_w, v_w;
    std::vector<Vector> m_b, v_b;
    std::int64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

AdamState make_adam_state(const std::vector<Matrix>& weights, const std::vector<Vector>& biases);

struct Optimizer {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-4;
    AdamState adam;

    void apply(std::vector<Matrix>& weights, std::vector<Vector>& biases,
               const std::vector<Matrix>& grad_w, const std::vector<Vector>& grad_b);
};

Optimizer make_optimizer(OptimizerKind kind, double learning_rate,
                         const std::vector<Matrix>& weights, const std::vector<Vector>& biases);

// target <- tau * online + (1 - tau) * target
void soft_update(std::vector<Matrix>& target_w, std::vector<Vector>& target_b,
                 const std::vector<Matrix>& online_w, const std::vector<Vector>& online_b,
                 double tau);

}  // namespace sddpg
