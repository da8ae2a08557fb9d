#include "sddpg/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace sddpg {

AdamState make_adam_state(const std::vector<Matrix>& weights, const std::vector<Vector>& biases) {
    AdamState s;
    for (const auto& w : weights) {
        s.m_w.emplace_back(w.rows, w.cols);
        s.v_w.emplace_back(w.rows, w.cols);
    }
    for (const auto& b : biases) {
        s.m_b.emplace_back(b.size(), 0.0);
        s.v_b.emplace_back(b.size(), 0.0);
    }
    return s;
}

namespace {

void adam_update(double* theta, double* m, double* v, const double* g, std::size_t n,
                 double lr, const AdamState& s, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        theta[i] -= lr * m_hat / (std::sqrt(v_hat) + s.epsilon);
    }
}

}  // namespace

void Optimizer::apply(std::vector<Matrix>& weights, std::vector<Vector>& biases,
                      const std::vector<Matrix>& grad_w, const std::vector<Vector>& grad_b) {
    if (weights.size() != grad_w.size() || biases.size() != grad_b.size())
        throw std::invalid_argument("Optimizer: gradient shape mismatch");

    if (kind == OptimizerKind::sgd) {
        for (std::size_t k = 0; k < weights.size(); ++k)
            for (std::size_t i = 0; i < weights[k].size(); ++i)
                weights[k].data[i] -= learning_rate * grad_w[k].data[i];
        for (std::size_t k = 0; k < biases.size(); ++k)
            for (std::size_t i = 0; i < biases[k].size(); ++i)
                biases[k][i] -= learning_rate * grad_b[k][i];
        return;
    }

    ++adam.step;
    const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
    for (std::size_t k = 0; k < weights.size(); ++k)
        adam_update(weights[k].data.data(), adam.m_w[k].data.data(), adam.v_w[k].data.data(),
                    grad_w[k].data.data(), weights[k].size(), learning_rate, adam, bc1, bc2);
    for (std::size_t k = 0; k < biases.size(); ++k)
        adam_update(biases[k].data(), adam.m_b[k].data(), adam.v_b[k].data(), grad_b[k].data(),
                    biases[k].size(), learning_rate, adam, bc1, bc2);
}

Optimizer make_optimizer(OptimizerKind kind, double learning_rate,
                         const std::vector<Matrix>& weights, const std::vector<Vector>& biases) {
    Optimizer opt;
    opt.kind = kind;
    opt.learning_rate = learning_rate;
    if (kind == OptimizerKind::adam) opt.adam = make_adam_state(weights, biases);
    return opt;
}

void soft_update(std::vector<Matrix>& target_w, std::vector<Vector>& target_b,
                 const std::vector<Matrix>& online_w, const std::vector<Vector>& online_b,
                 double tau) {
    for (std::size_t k = 0; k < target_w.size(); ++k)
        for (std::size_t i = 0; i < target_w[k].size(); ++i)
            target_w[k].data[i] = tau * online_w[k].data[i] + (1.0 - tau) * target_w[k].data[i];
    for (std::size_t k = 0; k < target_b.size(); ++k)
        for (std::size_t i = 0; i < target_b[k].size(); ++i)
            target_b[k][i] = tau * online_b[k][i] + (1.0 - tau) * target_b[k][i];
}

}  // namespace sddpg
