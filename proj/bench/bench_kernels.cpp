// Benchmark of the batched kernels: serial reference versus the OpenMP path,
// with an equality check so the comparison is between identical computations.

#include <chrono>
#include <cstdio>
#include <string>

#include "sddpg/batch.hpp"
#include "sddpg/critic.hpp"
#include "sddpg/eval.hpp"
#include "sddpg/parallel.hpp"

using namespace sddpg;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class Fn>
double time_ms(int reps, Fn&& fn) {
    const double t0 = now_ms();
    for (int i = 0; i < reps; ++i) fn();
    return (now_ms() - t0) / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %8.2f ms   openmp %8.2f ms   speedup %4.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int batch = 128;
    int reps = 10;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--batch" && i + 1 < argc) batch = std::stoi(argv[++i]);
        if (arg == "--reps" && i + 1 < argc) reps = std::stoi(argv[++i]);
    }
    std::printf("threads: %d, batch: %d, reps: %d\n", max_threads(), batch, reps);

    Rng rng(7);
    auto san = make_san({24, 256, 256, 2}, rng);
    CriticConfig cc;
    cc.state_dim = 24;
    cc.hidden = {512, 512};
    cc.action_layer = 1;
    auto critic = make_critic(cc, rng);
    LifConfig lif;
    PseudoGradConfig pg;

    std::vector<Vector> states(batch, Vector(24));
    for (auto& s : states)
        for (double& x : s) x = rng.uniform();

    // rollout/target-action kernel
    {
        auto a = batch_san_act(san, states, lif, 1, false);
        auto b = batch_san_act(san, states, lif, 1, true);
        const double ts = time_ms(reps, [&] { batch_san_act(san, states, lif, 1, false); });
        const double tp = time_ms(reps, [&] { batch_san_act(san, states, lif, 1, true); });
        report("batch_san_act", ts, tp, a == b);
    }

    // actor update kernel
    {
        auto a = batch_san_update_grads(san, critic, states, lif, pg, CurrentAdjoint::same_step,
                                        2, false);
        auto b = batch_san_update_grads(san, critic, states, lif, pg, CurrentAdjoint::same_step,
                                        2, true);
        bool same = a.mean_q == b.mean_q;
        for (std::size_t k = 0; same && k < a.grads.weights.size(); ++k)
            same = a.grads.weights[k].data == b.grads.weights[k].data;
        const double ts = time_ms(reps, [&] {
            batch_san_update_grads(san, critic, states, lif, pg, CurrentAdjoint::same_step, 2,
                                   false);
        });
        const double tp = time_ms(reps, [&] {
            batch_san_update_grads(san, critic, states, lif, pg, CurrentAdjoint::same_step, 2,
                                   true);
        });
        report("batch_san_update_grads", ts, tp, same);
    }

    // critic TD step
    {
        std::vector<Transition> batch_tr(batch);
        std::vector<std::array<double, 2>> next_actions(batch);
        for (int i = 0; i < batch; ++i) {
            batch_tr[i].state = states[i];
            batch_tr[i].next_state = states[(i + 1) % batch];
            batch_tr[i].action = {rng.uniform(), rng.uniform()};
            batch_tr[i].reward = rng.uniform(-1.0, 1.0);
            next_actions[i] = {rng.uniform(), rng.uniform()};
        }
        auto run = [&](bool parallel) {
            auto params = critic;
            auto opt = make_optimizer(OptimizerKind::adam, 1e-4, params.weights, params.biases);
            critic_train_step(params, critic, batch_tr, next_actions, 0.99, opt, true, parallel);
            return params;
        };
        const auto a = run(false);
        const auto b = run(true);
        bool same = true;
        for (std::size_t k = 0; same && k < a.weights.size(); ++k)
            same = a.weights[k].data == b.weights[k].data;
        const double ts = time_ms(reps, [&] { run(false); });
        const double tp = time_ms(reps, [&] { run(true); });
        report("critic_train_step", ts, tp, same);
    }

    // evaluation episodes
    {
        WorldSpec world;
        world.name = "bench";
        world.width = 10;
        world.height = 10;
        world.start_regions = {{1, 1, 8, 8}};
        world.goal_regions = {{1, 1, 8, 8}};
        world.min_separation = 4;
        world.obstacles.push_back(make_box(4, 4, 2, 2));

        const SanParams actor = san;
        const LifConfig actor_lif = lif;
        PolicyFn policy = [&](const Vector& obs, Rng& r) -> std::array<double, 2> {
            const auto train = poisson_encode(obs, actor_lif.timesteps, r);
            const auto act = san_infer(actor, train, actor_lif);
            return {act[0], act[1]};
        };
        EvalConfig ecfg;
        ecfg.episodes = 20;
        ecfg.seed = 3;
        ecfg.max_steps = 200;
        const auto a = evaluate_policy("bench", world, KinematicsConfig{}, RewardConfig{}, {},
                                       policy, ecfg, false);
        const auto b = evaluate_policy("bench", world, KinematicsConfig{}, RewardConfig{}, {},
                                       policy, ecfg, true);
        const double ts = time_ms(3, [&] {
            evaluate_policy("bench", world, KinematicsConfig{}, RewardConfig{}, {}, policy, ecfg,
                            false);
        });
        const double tp = time_ms(3, [&] {
            evaluate_policy("bench", world, KinematicsConfig{}, RewardConfig{}, {}, policy, ecfg,
                            true);
        });
        report("evaluate_policy", ts, tp, eval_report_csv(a) == eval_report_csv(b));
    }
    return 0;
}
