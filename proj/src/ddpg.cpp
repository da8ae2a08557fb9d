#include "sddpg/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sddpg {

const char* to_string(ActorKind k) {
    switch (k) {
        case ActorKind::san: return "san";
        case ActorKind::deep: return "deep";
        case ActorKind::deep_poisson: return "deep_poisson";
    }
    return "san";
}

ActorKind actor_kind_from_string(const std::string& s) {
    if (s == "san") return ActorKind::san;
    if (s == "deep") return ActorKind::deep;
    if (s == "deep_poisson") return ActorKind::deep_poisson;
    throw std::invalid_argument("unknown actor kind: " + s);
}

double noise_scale(const NoiseConfig& cfg, std::int64_t step) {
    if (cfg.decay_steps <= 0) return cfg.sigma_end;
    const double frac = std::min(1.0, static_cast<double>(step) / cfg.decay_steps);
    return cfg.sigma_start + frac * (cfg.sigma_end - cfg.sigma_start);
}

std::array<double, 2> explore_action(const std::array<double, 2>& action, double sigma, Rng& rng) {
    std::array<double, 2> out = action;
    if (sigma > 0.0)
        for (double& a : out) a = std::clamp(a + sigma * rng.normal(), 0.0, 1.0);
    return out;
}

long CurriculumSchedule::total_budget() const {
    long total = 0;
    for (const auto& s : stages) total += s.step_budget;
    return total;
}

void CurriculumSchedule::validate() const {
    if (stages.empty()) throw std::invalid_argument("CurriculumSchedule: no stages");
    for (const auto& s : stages) {
        if (s.step_budget < 0) throw std::invalid_argument("CurriculumSchedule: negative budget");
        s.world.validate();
    }
}

TrainState init_train_state(const TrainConfig& cfg, int observation_dim, std::uint64_t seed) {
    cfg.lif.validate();
    cfg.pseudo.validate();
    cfg.reward.validate();

    TrainState st;
    st.kind = cfg.actor_kind;
    st.seed = seed;
    st.rng = Rng(Rng::mix(seed, 0x76a5));
    st.global_step = 0;
    st.update_counter = 0;
    st.buffer = ReplayBuffer(static_cast<std::size_t>(cfg.replay_capacity));

    std::vector<int> actor_sizes;
    actor_sizes.push_back(observation_dim);
    for (int h : cfg.san_hidden) actor_sizes.push_back(h);
    actor_sizes.push_back(2);

    Rng init_rng(Rng::mix(seed, 0x1217));
    if (cfg.actor_kind == ActorKind::san) {
        st.san = make_san(actor_sizes, init_rng);
        st.san_target = st.san;
        st.actor_opt = make_optimizer(cfg.optimizer, cfg.actor_lr, st.san.weights, st.san.biases);
    } else {
        st.deep = make_deep_actor(actor_sizes, init_rng);
        st.deep_target = st.deep;
        st.actor_opt =
            make_optimizer(cfg.optimizer, cfg.actor_lr, st.deep.weights, st.deep.biases);
    }

    CriticConfig cc;
    cc.state_dim = observation_dim;
    cc.action_dim = 2;
    cc.hidden = cfg.critic_hidden;
    cc.action_layer = cfg.critic_action_layer;
    st.critic = make_critic(cc, init_rng);
    st.critic_target = st.critic;
    st.critic_opt =
        make_optimizer(cfg.optimizer, cfg.critic_lr, st.critic.weights, st.critic.biases);
    return st;
}

namespace {

constexpr std::uint64_t kNextActionTag = 0x6e657874;
constexpr std::uint64_t kActorPassTag = 0x61757064;

}  // namespace

UpdateDiagnostics sddpg_update(TrainState& st, std::span<const Transition> batch,
                               const TrainConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("sddpg_update: empty batch");

    std::vector<Vector> next_states, states;
    next_states.reserve(batch.size());
    states.reserve(batch.size());
    for (const auto& tr : batch) {
        next_states.push_back(tr.next_state);
        states.push_back(tr.state);
    }

    const std::uint64_t next_stream = Rng::mix(st.seed, kNextActionTag, st.update_counter);
    const std::uint64_t actor_stream = Rng::mix(st.seed, kActorPassTag, st.update_counter);

    // Target-actor actions for the TD targets.
    std::vector<std::array<double, 2>> next_actions;
    switch (st.kind) {
        case ActorKind::san:
            next_actions =
                batch_san_act(st.san_target, next_states, cfg.lif, next_stream, cfg.parallel);
            break;
        case ActorKind::deep:
            next_actions = batch_deep_act(st.deep_target, next_states, 0, next_stream,
                                          cfg.parallel);
            break;
        case ActorKind::deep_poisson:
            next_actions = batch_deep_act(st.deep_target, next_states, cfg.lif.timesteps,
                                          next_stream, cfg.parallel);
            break;
    }

    UpdateDiagnostics diag;
    diag.critic_loss = critic_train_step(st.critic, st.critic_target, batch, next_actions,
                                         cfg.gamma, st.critic_opt, cfg.timeout_bootstraps,
                                         cfg.parallel);

    // Actor ascent step through the critic's action gradient.
    const bool actor_active = static_cast<long>(st.update_counter) >= cfg.actor_delay_updates;
    if (!actor_active) {
        soft_update(st.critic_target.weights, st.critic_target.biases, st.critic.weights,
                    st.critic.biases, cfg.tau);
        ++st.update_counter;
        return diag;
    }
    if (st.kind == ActorKind::san) {
        const auto res = batch_san_update_grads(st.san, st.critic, states, cfg.lif, cfg.pseudo,
                                                cfg.current_rule, actor_stream, cfg.parallel);
        st.actor_opt.apply(st.san.weights, st.san.biases, res.grads.weights, res.grads.biases);
        diag.mean_q = res.mean_q;
        diag.actor_grad_norm = res.grad_norm;
        soft_update(st.san_target.weights, st.san_target.biases, st.san.weights, st.san.biases,
                    cfg.tau);
    } else {
        const int poisson_t = st.kind == ActorKind::deep_poisson ? cfg.lif.timesteps : 0;
        const auto res = batch_deep_update_grads(st.deep, st.critic, states, poisson_t,
                                                 actor_stream, cfg.parallel);
        st.actor_opt.apply(st.deep.weights, st.deep.biases, res.grads.weights, res.grads.biases);
        diag.mean_q = res.mean_q;
        diag.actor_grad_norm = res.grad_norm;
        soft_update(st.deep_target.weights, st.deep_target.biases, st.deep.weights,
                    st.deep.biases, cfg.tau);
    }
    soft_update(st.critic_target.weights, st.critic_target.biases, st.critic.weights,
                st.critic.biases, cfg.tau);

    ++st.update_counter;
    return diag;
}

std::array<double, 2> policy_action(const TrainState& st, const TrainConfig& cfg,
                                    const Vector& observation, Rng& rng) {
    switch (st.kind) {
        case ActorKind::san: {
            const auto train = poisson_encode(observation, cfg.lif.timesteps, rng);
            const auto a = san_infer(st.san, train, cfg.lif);
            return {a[0], a[1]};
        }
        case ActorKind::deep: {
            const auto a = deep_actor_forward(st.deep, observation);
            return {a[0], a[1]};
        }
        case ActorKind::deep_poisson: {
            const auto in = poissonize_observation(observation, cfg.lif.timesteps, rng);
            const auto a = deep_actor_forward(st.deep, in);
            return {a[0], a[1]};
        }
    }
    return {0.0, 0.0};
}

TrainResult run_training(TrainState& st, const CurriculumSchedule& schedule,
                         const TrainConfig& cfg, const StageCallback& on_stage_end) {
    schedule.validate();
    TrainResult result;

    while (st.stage_index < static_cast<int>(schedule.stages.size())) {
        const StageSpec& stage = schedule.stages[st.stage_index];
        SimEnv env(stage.world, cfg.kinematics, cfg.reward, cfg.observation,
                   cfg.max_episode_steps);
        long stage_steps = 0;

        while (stage_steps < stage.step_budget) {
            env.reset(st.rng, cfg.placement_clearance);
            Vector obs = env.observation();
            double episode_return = 0.0;
            TerminalCause cause = TerminalCause::none;
            std::array<double, 2> held_action{0.0, 0.0};
            int held_for = cfg.warmup_action_hold;  // force a draw on first use

            while (cause == TerminalCause::none) {
                const bool in_warmup =
                    static_cast<long>(st.buffer.size()) < cfg.warmup_steps;
                std::array<double, 2> action;
                if (in_warmup && cfg.random_warmup_actions) {
                    if (held_for >= cfg.warmup_action_hold) {
                        held_action = {st.rng.uniform(), st.rng.uniform()};
                        held_for = 0;
                    }
                    ++held_for;
                    action = held_action;
                } else {
                    const auto greedy = policy_action(st, cfg, obs, st.rng);
                    const double sigma = noise_scale(cfg.noise, st.global_step);
                    action = explore_action(greedy, sigma, st.rng);
                }
                const auto speeds =
                    decode_action({action[0], action[1]}, cfg.kinematics.v_min,
                                  cfg.kinematics.v_max);
                const auto res = env.step(speeds.left, speeds.right);
                Vector next_obs = env.observation();

                Transition tr;
                tr.state = obs;
                tr.action = action;
                tr.reward = res.reward;
                tr.next_state = next_obs;
                tr.cause = res.cause;
                st.buffer.push(std::move(tr));

                obs = std::move(next_obs);
                episode_return += res.reward;
                cause = res.cause;
                ++st.global_step;
                ++stage_steps;

                if (static_cast<long>(st.buffer.size()) >= cfg.warmup_steps &&
                    st.global_step % cfg.update_every == 0) {
                    const auto batch = st.buffer.sample(cfg.batch_size, st.rng);
                    sddpg_update(st, batch, cfg);
                }
            }

            EpisodeLogRow row;
            row.episode = st.episode_index++;
            row.stage = st.stage_index;
            row.outcome = cause;
            row.steps = env.steps();
            row.episode_return = episode_return;
            result.log.push_back(row);
        }
        result.total_steps += stage_steps;
        // advance first so a checkpoint taken here resumes at the next stage
        ++st.stage_index;
        if (on_stage_end) on_stage_end(st.stage_index - 1, st);
    }
    return result;
}

TrainResult run_training(const CurriculumSchedule& schedule, const TrainConfig& cfg,
                         std::uint64_t seed, TrainState* final_state,
                         const StageCallback& on_stage_end) {
    schedule.validate();
    const int obs_dim = observation_channels(cfg.kinematics);
    TrainState st = init_train_state(cfg, obs_dim, seed);
    TrainResult result = run_training(st, schedule, cfg, on_stage_end);
    if (final_state) *final_state = std::move(st);
    return result;
}

std::string training_log_csv(const std::vector<EpisodeLogRow>& rows) {
    std::ostringstream os;
    os << "# train-log v1\n";
    os << "episode,stage,outcome,steps,return\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.10g", r.episode_return);
        os << r.episode << "," << r.stage << "," << to_string(r.outcome) << "," << r.steps << ","
           << buf << "\n";
    }
    return os.str();
}

}  // namespace sddpg
