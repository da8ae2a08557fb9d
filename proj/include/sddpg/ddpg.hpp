#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sddpg/baselines.hpp"
#include "sddpg/batch.hpp"
#include "sddpg/critic.hpp"
#include "sddpg/replay.hpp"
#include "sddpg/san.hpp"
#include "sddpg/sim.hpp"
#include "sddpg/stbp.hpp"

namespace sddpg {

enum class ActorKind { san, deep, deep_poisson };

const char* to_string(ActorKind k);
ActorKind actor_kind_from_string(const std::string& s);

// Additive Gaussian action noise with a linear decay schedule.
struct NoiseConfig {
    double sigma_start = 0.3;
    double sigma_end = 0.05;
    std::int64_t decay_steps = 30000;
};

double noise_scale(const NoiseConfig& cfg, std::int64_t step);

std::array<double, 2> explore_action(const std::array<double, 2>& action, double sigma, Rng& rng);

// Every knob of the training run, presets fill these in.
struct TrainConfig {
    ActorKind actor_kind = ActorKind::san;

    LifConfig lif;
    PseudoGradConfig pseudo;
    CurrentAdjoint current_rule = CurrentAdjoint::same_step;
    std::vector<int> san_hidden = {256, 256};

    std::vector<int> critic_hidden = {512, 512};
    int critic_action_layer = 1;

    KinematicsConfig kinematics;
    RewardConfig reward;
    ObservationConfig observation;
    NoiseConfig noise;

    double gamma = 0.99;
    double tau = 0.01;
    double actor_lr = 1e-5;
    double critic_lr = 1e-4;
    OptimizerKind optimizer = OptimizerKind::adam;

    int batch_size = 256;
    long replay_capacity = 100000;
    long warmup_steps = 1000;
    // During warmup the agent takes uniform random actions, held for a few
    // steps at a time so the rollouts actually cover ground; updates start
    // once the buffer holds warmup_steps transitions.
    bool random_warmup_actions = true;
    int warmup_action_hold = 5;
    int update_every = 1;
    // Critic-only updates for the first N joint updates; the actor starts
    // following the critic once the TD fit has seen some shaped rewards.
    long actor_delay_updates = 0;
    long max_episode_steps = 1000;
    double placement_clearance = 0.45;
    bool timeout_bootstraps = true;
    bool parallel = true;
};

struct StageSpec {
    WorldSpec world;
    long step_budget = 0;
};

struct CurriculumSchedule {
    std::vector<StageSpec> stages;

    long total_budget() const;
    void validate() const;
};

struct EpisodeLogRow {
    long episode = 0;
    int stage = 0;
    TerminalCause outcome = TerminalCause::none;
    long steps = 0;
    double episode_return = 0.0;
};

// Full mutable training state; checkpoints serialize exactly this.
struct TrainState {
    ActorKind kind = ActorKind::san;
    SanParams san, san_target;
    DeepActorParams deep, deep_target;
    CriticParams critic, critic_target;
    Optimizer actor_opt, critic_opt;
    ReplayBuffer buffer;
    Rng rng{0};
    std::uint64_t seed = 0;
    std::int64_t global_step = 0;
    std::uint64_t update_counter = 0;
    long episode_index = 0;
    int stage_index = 0;
};

TrainState init_train_state(const TrainConfig& cfg, int observation_dim, std::uint64_t seed);

struct UpdateDiagnostics {
    double critic_loss = 0.0;
    double mean_q = 0.0;
    double actor_grad_norm = 0.0;
};

// One joint update: critic TD step, actor ascent step through the critic's
// action gradient, then soft target updates for both networks.
UpdateDiagnostics sddpg_update(TrainState& st, std::span<const Transition> batch,
                               const TrainConfig& cfg);

// Greedy action of the current online actor for one observation.
std::array<double, 2> policy_action(const TrainState& st, const TrainConfig& cfg,
                                    const Vector& observation, Rng& rng);

struct TrainResult {
    std::vector<EpisodeLogRow> log;
    long total_steps = 0;
};

using StageCallback = std::function<void(int completed_stage, const TrainState&)>;

// Runs stages st.stage_index..end of the curriculum, mutating the state in
// place. Stage budgets are consumed at episode granularity: a stage advances
// at the first episode end at or beyond its budget. Checkpointing hooks fire
// at each stage boundary.
TrainResult run_training(TrainState& st, const CurriculumSchedule& schedule,
                         const TrainConfig& cfg, const StageCallback& on_stage_end = {});

// Convenience wrapper: fresh state from the seed, full curriculum.
TrainResult run_training(const CurriculumSchedule& schedule, const TrainConfig& cfg,
                         std::uint64_t seed, TrainState* final_state = nullptr,
                         const StageCallback& on_stage_end = {});

// Training-log CSV, versioned schema; byte-stable for identical runs.
std::string training_log_csv(const std::vector<EpisodeLogRow>& rows);

}  // namespace sddpg
