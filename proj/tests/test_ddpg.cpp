#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "sddpg/ddpg.hpp"

using namespace sddpg;

namespace {

WorldSpec toy_world() {
    WorldSpec world;
    world.width = 10.0;
    world.height = 10.0;
    world.start_regions = {{1.0, 1.0, 8.0, 8.0}};
    world.goal_regions = {{1.0, 1.0, 8.0, 8.0}};
    world.min_separation = 3.0;
    return world;
}

TrainConfig toy_config() {
    TrainConfig cfg;
    cfg.lif.timesteps = 5;
    cfg.san_hidden = {16, 16};
    cfg.critic_hidden = {24, 24};
    cfg.batch_size = 8;
    cfg.replay_capacity = 2000;
    cfg.warmup_steps = 20;
    cfg.max_episode_steps = 60;
    cfg.noise.decay_steps = 500;
    cfg.parallel = false;
    return cfg;
}

Transition make_transition(Rng& rng, int dim, TerminalCause cause = TerminalCause::none) {
    Transition tr;
    tr.state = Vector(dim);
    for (double& x : tr.state) x = rng.uniform();
    tr.action = {rng.uniform(), rng.uniform()};
    tr.next_state = Vector(dim);
    for (double& x : tr.next_state) x = rng.uniform();
    tr.reward = rng.uniform(-1.0, 1.0);
    tr.cause = cause;
    return tr;
}

}  // namespace

TEST_CASE("ReplayBuffer: bounded FIFO eviction") {
    ReplayBuffer buf(3);
    Rng rng(1);
    for (int i = 0; i < 5; ++i) {
        auto tr = make_transition(rng, 2);
        tr.reward = i;
        buf.push(std::move(tr));
    }
    CHECK(buf.size() == 3);
    // Oldest two were evicted: remaining rewards are 2, 3, 4 oldest-first.
    CHECK(buf.at(0).reward == 2.0);
    CHECK(buf.at(1).reward == 3.0);
    CHECK(buf.at(2).reward == 4.0);
}

TEST_CASE("ReplayBuffer: sampling is uniform with replacement over contents") {
    ReplayBuffer buf(4);
    Rng rng(2);
    for (int i = 0; i < 4; ++i) {
        auto tr = make_transition(rng, 2);
        tr.reward = i;
        buf.push(std::move(tr));
    }
    std::map<double, int> counts;
    const auto batch = buf.sample(40000, rng);
    for (const auto& tr : batch) counts[tr.reward]++;
    for (const auto& [r, c] : counts) CHECK(std::abs(c / 40000.0 - 0.25) < 0.02);
}

TEST_CASE("ReplayBuffer: sampling an empty buffer is an error") {
    ReplayBuffer buf(4);
    Rng rng(3);
    CHECK_THROWS_AS(buf.sample(1, rng), std::invalid_argument);
}

TEST_CASE("explore_action: zero scale is the identity") {
    Rng rng(4);
    const std::array<double, 2> a{0.3, 0.7};
    CHECK(explore_action(a, 0.0, rng) == a);
}

TEST_CASE("explore_action: perturbed actions stay clamped to [0,1]") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto a = explore_action({1.0, 1.0}, 0.5, rng);
        CHECK(a[0] <= 1.0);
        CHECK(a[1] <= 1.0);
        const auto b = explore_action({0.0, 0.0}, 0.5, rng);
        CHECK(b[0] >= 0.0);
        CHECK(b[1] >= 0.0);
    }
}

TEST_CASE("noise_scale: linear decay endpoints") {
    NoiseConfig cfg;
    cfg.sigma_start = 0.4;
    cfg.sigma_end = 0.05;
    cfg.decay_steps = 1000;
    CHECK(noise_scale(cfg, 0) == doctest::Approx(0.4));
    CHECK(noise_scale(cfg, 500) == doctest::Approx(0.225));
    CHECK(noise_scale(cfg, 1000) == doctest::Approx(0.05));
    CHECK(noise_scale(cfg, 5000) == doctest::Approx(0.05));
}

TEST_CASE("sddpg_update: constant-critic batch leaves the SAN unchanged") {
    auto cfg = toy_config();
    auto st = init_train_state(cfg, observation_channels(cfg.kinematics), 11);
    // Zero critic and zero rewards: TD targets stay zero, loss zero, so the
    // critic stays constant and the action gradient vanishes.
    for (auto& w : st.critic.weights)
        for (double& x : w.data) x = 0.0;
    for (auto& b : st.critic.biases)
        for (double& x : b) x = 0.0;
    st.critic_target = st.critic;

    Rng rng(6);
    std::vector<Transition> batch;
    for (int i = 0; i < 8; ++i) {
        auto tr = make_transition(rng, observation_channels(cfg.kinematics));
        tr.reward = 0.0;
        batch.push_back(std::move(tr));
    }
    const auto before = st.san;
    const auto diag = sddpg_update(st, batch, cfg);
    CHECK(diag.critic_loss == doctest::Approx(0.0));
    CHECK(diag.actor_grad_norm == doctest::Approx(0.0));
    for (std::size_t k = 0; k < before.weights.size(); ++k)
        for (std::size_t i = 0; i < before.weights[k].size(); ++i)
            CHECK(st.san.weights[k].data[i] == before.weights[k].data[i]);
}

TEST_CASE("sddpg_update: critic loss decreases on a fixed repeated transition") {
    auto cfg = toy_config();
    cfg.critic_lr = 1e-3;
    auto st = init_train_state(cfg, observation_channels(cfg.kinematics), 12);
    Rng rng(7);
    auto tr = make_transition(rng, observation_channels(cfg.kinematics), TerminalCause::goal);
    tr.reward = 2.0;
    std::vector<Transition> batch(16, tr);

    double first = 0.0, last = 0.0;
    for (int i = 0; i < 60; ++i) {
        const auto diag = sddpg_update(st, batch, cfg);
        if (i == 0) first = diag.critic_loss;
        last = diag.critic_loss;
    }
    CHECK(last < first);
}

TEST_CASE("sddpg_update: 1000 updates on random experience stay finite") {
    auto cfg = toy_config();
    auto st = init_train_state(cfg, observation_channels(cfg.kinematics), 13);
    Rng rng(8);
    std::vector<Transition> batch;
    for (int i = 0; i < cfg.batch_size; ++i)
        batch.push_back(make_transition(rng, observation_channels(cfg.kinematics)));

    for (int i = 0; i < 1000; ++i) {
        // rotate some fresh experience through the batch
        batch[i % batch.size()] = make_transition(rng, observation_channels(cfg.kinematics));
        const auto diag = sddpg_update(st, batch, cfg);
        REQUIRE(std::isfinite(diag.critic_loss));
        REQUIRE(std::isfinite(diag.mean_q));
        REQUIRE(std::isfinite(diag.actor_grad_norm));
    }
    for (const auto& w : st.san.weights) REQUIRE(all_finite(w));
    for (const auto& w : st.critic.weights) REQUIRE(all_finite(w));
}

TEST_CASE("sddpg_update: deep and deep_poisson actor kinds run and stay finite") {
    for (auto kind : {ActorKind::deep, ActorKind::deep_poisson}) {
        auto cfg = toy_config();
        cfg.actor_kind = kind;
        auto st = init_train_state(cfg, observation_channels(cfg.kinematics), 14);
        Rng rng(9);
        std::vector<Transition> batch;
        for (int i = 0; i < cfg.batch_size; ++i)
            batch.push_back(make_transition(rng, observation_channels(cfg.kinematics)));
        for (int i = 0; i < 50; ++i) {
            const auto diag = sddpg_update(st, batch, cfg);
            REQUIRE(std::isfinite(diag.critic_loss));
        }
        for (const auto& w : st.deep.weights) REQUIRE(all_finite(w));
    }
}

TEST_CASE("run_training: zero budget returns initialized models and an empty log") {
    auto cfg = toy_config();
    CurriculumSchedule schedule;
    schedule.stages = {{toy_world(), 0}};
    TrainState st;
    const auto result = run_training(schedule, cfg, 21, &st);
    CHECK(result.log.empty());
    CHECK(result.total_steps == 0);
    CHECK(st.san.layer_count() == 3);
}

TEST_CASE("run_training: unreachable goal episodes end in timeout at the step cap") {
    auto cfg = toy_config();
    cfg.warmup_steps = 100000;  // never reached: no updates, just rollouts
    cfg.random_warmup_actions = false;
    cfg.max_episode_steps = 40;
    cfg.noise.sigma_start = 0.0;
    cfg.noise.sigma_end = 0.0;

    WorldSpec world = toy_world();
    // start and goal pinned far apart; a fresh random policy cannot cover
    // 7 m in 40 steps at v_max 0.5 (max 2 m)
    world.start_regions = {{1.0, 1.0, 0.0, 0.0}};
    world.goal_regions = {{8.5, 8.5, 0.0, 0.0}};
    world.min_separation = 5.0;

    CurriculumSchedule schedule;
    schedule.stages = {{world, 40}};
    const auto result = run_training(schedule, cfg, 22, nullptr);
    REQUIRE(!result.log.empty());
    CHECK(result.log[0].outcome == TerminalCause::timeout);
    CHECK(result.log[0].steps == 40);
}

TEST_CASE("run_training: identical seeds give byte-identical logs") {
    auto cfg = toy_config();
    cfg.warmup_steps = 30;
    CurriculumSchedule schedule;
    schedule.stages = {{toy_world(), 150}, {toy_world(), 150}};

    const auto a = run_training(schedule, cfg, 33, nullptr);
    const auto b = run_training(schedule, cfg, 33, nullptr);
    CHECK(training_log_csv(a.log) == training_log_csv(b.log));
    CHECK(!a.log.empty());

    const auto c = run_training(schedule, cfg, 34, nullptr);
    CHECK(training_log_csv(a.log) != training_log_csv(c.log));
}

TEST_CASE("run_training: serial and parallel updates produce identical logs") {
    auto cfg = toy_config();
    cfg.warmup_steps = 30;
    CurriculumSchedule schedule;
    schedule.stages = {{toy_world(), 120}};

    cfg.parallel = false;
    const auto serial = run_training(schedule, cfg, 35, nullptr);
    cfg.parallel = true;
    const auto parallel = run_training(schedule, cfg, 35, nullptr);
    CHECK(training_log_csv(serial.log) == training_log_csv(parallel.log));
}

TEST_CASE("run_training: every episode ends with exactly one cause") {
    auto cfg = toy_config();
    cfg.warmup_steps = 50;
    CurriculumSchedule schedule;
    schedule.stages = {{toy_world(), 400}};
    const auto result = run_training(schedule, cfg, 36, nullptr);
    REQUIRE(!result.log.empty());
    long steps = 0;
    for (const auto& row : result.log) {
        CHECK(row.outcome != TerminalCause::none);
        CHECK(row.steps >= 1);
        steps += row.steps;
    }
    CHECK(steps == result.total_steps);
    CHECK(result.total_steps >= 400);  // budget consumed at episode granularity
}

TEST_CASE("batch kernels: serial and OpenMP paths are bit-identical") {
    Rng rng(41);
    auto san = make_san({24, 32, 32, 2}, rng);
    CriticConfig cc;
    cc.state_dim = 24;
    cc.hidden = {32, 32};
    auto critic = make_critic(cc, rng);
    LifConfig lif;
    PseudoGradConfig pg;

    std::vector<Vector> states(33, Vector(24));
    for (auto& s : states)
        for (double& x : s) x = rng.uniform();

    const auto acts_s = batch_san_act(san, states, lif, 99, false);
    const auto acts_p = batch_san_act(san, states, lif, 99, true);
    CHECK(acts_s == acts_p);

    const auto gs = batch_san_update_grads(san, critic, states, lif, pg,
                                           CurrentAdjoint::same_step, 99, false);
    const auto gp = batch_san_update_grads(san, critic, states, lif, pg,
                                           CurrentAdjoint::same_step, 99, true);
    CHECK(gs.mean_q == gp.mean_q);
    for (std::size_t k = 0; k < gs.grads.weights.size(); ++k)
        for (std::size_t i = 0; i < gs.grads.weights[k].size(); ++i)
            CHECK(gs.grads.weights[k].data[i] == gp.grads.weights[k].data[i]);

    auto deep = make_deep_actor({24, 32, 32, 2}, rng);
    const auto ds = batch_deep_update_grads(deep, critic, states, 5, 77, false);
    const auto dp = batch_deep_update_grads(deep, critic, states, 5, 77, true);
    for (std::size_t k = 0; k < ds.grads.weights.size(); ++k)
        for (std::size_t i = 0; i < ds.grads.weights[k].size(); ++i)
            CHECK(ds.grads.weights[k].data[i] == dp.grads.weights[k].data[i]);
}

TEST_CASE("training_log_csv: schema header and stable formatting") {
    std::vector<EpisodeLogRow> rows(1);
    rows[0].episode = 3;
    rows[0].stage = 1;
    rows[0].outcome = TerminalCause::goal;
    rows[0].steps = 42;
    rows[0].episode_return = 31.25;
    const auto csv = training_log_csv(rows);
    CHECK(csv == "# train-log v1\nepisode,stage,outcome,steps,return\n3,1,goal,42,31.25\n");
}
