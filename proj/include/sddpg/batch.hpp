#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "sddpg/baselines.hpp"
#include "sddpg/critic.hpp"
#include "sddpg/san.hpp"
#include "sddpg/stbp.hpp"

namespace sddpg {

// Batched kernels over independent items. Every item derives its own spike
// stream from (stream_seed, item index), so the serial path (parallel=false)
// and the OpenMP path produce bit-identical results; gradients are reduced
// in item order regardless of thread count.

// Encode + infer per item: the rollout/target-action kernel.
std::vector<std::array<double, 2>> batch_san_act(const SanParams& params,
                                                 std::span<const Vector> states,
                                                 const LifConfig& cfg, std::uint64_t stream_seed,
                                                 bool parallel);

struct ActorBatchGrads {
    SanGradients grads;       // averaged over the batch
    double mean_q = 0.0;      // critic value at the fresh actions
    double grad_norm = 0.0;   // L2 of the averaged gradient
};

// The spiking actor update kernel: fresh encodings, forward with trace,
// critic action gradient, backward, averaged accumulation.
ActorBatchGrads batch_san_update_grads(const SanParams& actor, const CriticParams& critic,
                                       std::span<const Vector> states, const LifConfig& cfg,
                                       const PseudoGradConfig& pg, CurrentAdjoint rule,
                                       std::uint64_t stream_seed, bool parallel);

struct DeepBatchGrads {
    DeepActorGradients grads;
    double mean_q = 0.0;
    double grad_norm = 0.0;
};

// Deep-actor analog; poisson_timesteps > 0 poissonizes the actor input
// (the DDPG-Poisson baseline), 0 feeds the raw observation.
DeepBatchGrads batch_deep_update_grads(const DeepActorParams& actor, const CriticParams& critic,
                                       std::span<const Vector> states, int poisson_timesteps,
                                       std::uint64_t stream_seed, bool parallel);

std::vector<std::array<double, 2>> batch_deep_act(const DeepActorParams& params,
                                                  std::span<const Vector> states,
                                                  int poisson_timesteps,
                                                  std::uint64_t stream_seed, bool parallel);

}  // namespace sddpg
