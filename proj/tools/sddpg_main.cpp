// Command-line front end: train, evaluate, quantize, convert, and benchmark
// policies for the 2D mapless-navigation task.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "sddpg/config.hpp"
#include "sddpg/eval.hpp"
#include "sddpg/model_io.hpp"
#include "sddpg/report.hpp"

using namespace sddpg;

namespace {

#ifndef SDDPG_DEFAULT_WORLDS_DIR
#define SDDPG_DEFAULT_WORLDS_DIR "worlds"
#endif

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

RunConfig resolve_config(const std::string& preset, const std::string& config_path) {
    RunConfig cfg = make_preset(preset);
    if (!config_path.empty()) apply_overrides(cfg, load_key_values(config_path));
    return cfg;
}

// Policy adapters over loaded model files.
PolicyFn make_policy(const ModelFile& m, bool poissonize, const LifConfig& lif_override,
                     int* timesteps_out) {
    switch (m.kind) {
        case ModelKind::san: {
            const SanParams params = m.san;
            const LifConfig lif = m.lif;
            if (timesteps_out) *timesteps_out = lif.timesteps;
            return [params, lif](const Vector& obs, Rng& rng) -> std::array<double, 2> {
                const auto train = poisson_encode(obs, lif.timesteps, rng);
                const auto a = san_infer(params, train, lif);
                return {a[0], a[1]};
            };
        }
        case ModelKind::quantized: {
            const QuantizedSan params = m.quantized;
            const LifConfig lif = m.lif;
            if (timesteps_out) *timesteps_out = lif.timesteps;
            return [params, lif](const Vector& obs, Rng& rng) -> std::array<double, 2> {
                const auto train = poisson_encode(obs, lif.timesteps, rng);
                const auto a = quantized_infer(params, train, lif);
                return {a[0], a[1]};
            };
        }
        case ModelKind::deep: {
            const DeepActorParams params = m.deep;
            const int t = lif_override.timesteps;
            if (timesteps_out) *timesteps_out = poissonize ? t : 0;
            if (poissonize)
                return [params, t](const Vector& obs, Rng& rng) -> std::array<double, 2> {
                    const auto in = poissonize_observation(obs, t, rng);
                    const auto a = deep_actor_forward(params, in);
                    return {a[0], a[1]};
                };
            return [params](const Vector& obs, Rng&) -> std::array<double, 2> {
                const auto a = deep_actor_forward(params, obs);
                return {a[0], a[1]};
            };
        }
        default:
            throw std::invalid_argument("model kind has no evaluation policy");
    }
}

int cmd_train(const RunConfig& cfg, const std::string& worlds_dir, const std::string& out_dir,
              const std::vector<std::uint64_t>& seeds, const std::string& resume_path) {
    const auto schedule = load_schedule(cfg, worlds_dir);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/config.txt", show_config(cfg));

    for (const std::uint64_t seed : seeds) {
        const std::string seed_dir = out_dir + "/seed" + std::to_string(seed);
        std::filesystem::create_directories(seed_dir);

        TrainState st;
        if (!resume_path.empty()) {
            st = load_checkpoint(resume_path);
            std::cout << "resumed from " << resume_path << " at stage " << st.stage_index
                      << ", step " << st.global_step << "\n";
        } else {
            st = init_train_state(cfg.train, observation_channels(cfg.train.kinematics), seed);
        }

        const auto on_stage = [&](int stage, const TrainState& state) {
            save_checkpoint(state, seed_dir + "/stage" + std::to_string(stage) + ".ckpt");
        };

        std::cout << "training seed " << seed << " (" << to_string(cfg.train.actor_kind)
                  << ", T=" << cfg.train.lif.timesteps << ", "
                  << schedule.total_budget() << " steps)\n";
        const auto result = run_training(st, schedule, cfg.train, on_stage);

        write_file(seed_dir + "/train_log.csv", training_log_csv(result.log));
        if (st.kind == ActorKind::san)
            save_san(st.san, cfg.train.lif, seed_dir + "/actor.model");
        else
            save_deep(st.deep, seed_dir + "/actor.model");
        save_critic(st.critic, seed_dir + "/critic.model");

        long goals = 0;
        for (const auto& row : result.log) goals += row.outcome == TerminalCause::goal ? 1 : 0;
        std::cout << "  episodes " << result.log.size() << ", goal episodes " << goals << ", log "
                  << seed_dir << "/train_log.csv\n";
    }
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& worlds_dir, const std::string& model_path,
             const std::string& method, const std::string& out_dir, bool poissonize,
             bool dump_trajectories) {
    const auto world = load_eval_world(cfg, worlds_dir);
    const auto model = load_model(model_path);

    std::string name = method;
    if (name.empty()) {
        name = model.kind == ModelKind::san        ? "san"
               : model.kind == ModelKind::quantized ? "san_quantized"
               : poissonize                         ? "deep_poisson"
                                                    : "deep";
    }

    int timesteps = 0;
    const auto policy = make_policy(model, poissonize, cfg.train.lif, &timesteps);

    std::filesystem::create_directories(out_dir);
    TrajectoryDump dump;
    auto report = evaluate_policy_with_trajectories(
        name, world, cfg.train.kinematics, cfg.train.reward, cfg.train.observation, policy,
        cfg.eval, cfg.train.parallel, dump_trajectories ? &dump : nullptr);
    report.timesteps = timesteps;

    save_eval_report(report, out_dir + "/report.csv");
    write_file(out_dir + "/heatmap.csv", heatmap_csv(report.heatmap));
    write_file(out_dir + "/heatmap.svg",
               heatmap_svg(report.heatmap, name + " crossing-success rate"));
    if (dump_trajectories) write_file(out_dir + "/trajectories.csv", dump.csv);

    std::cout << name << " on " << world.name << ": success " << report.success_rate()
              << ", collision " << report.collision_rate() << ", timeout "
              << report.timeout_rate() << " (" << report.episodes.size() << " episodes)\n";
    std::cout << "report " << out_dir << "/report.csv\n";
    return 0;
}

int cmd_quantize(const std::string& model_path, const std::string& out_path, int weight_max) {
    const auto model = load_model(model_path);
    if (model.kind != ModelKind::san)
        throw std::invalid_argument("quantize expects a spiking actor model");
    const auto q = quantize_san(model.san, model.lif, weight_max);
    save_quantized(q, model.lif, out_path);
    std::cout << "quantized " << model_path << " -> " << out_path << " (ratios:";
    for (double r : q.ratios) std::cout << " " << r;
    std::cout << ")\n";
    return 0;
}

int cmd_convert(const RunConfig& cfg, const std::string& worlds_dir,
                const std::string& model_path, const std::string& out_path, int timesteps,
                int calib_episodes, std::uint64_t seed) {
    const auto model = load_model(model_path);
    if (model.kind != ModelKind::deep)
        throw std::invalid_argument("convert expects a deep actor model");

    // Record calibration states by rolling the deep actor in the eval world.
    const auto world = load_eval_world(cfg, worlds_dir);
    std::vector<Vector> states;
    SimEnv env(world, cfg.train.kinematics, cfg.train.reward, cfg.train.observation,
               cfg.eval.max_steps);
    Rng rng(Rng::mix(seed, 0xca11b));
    for (int e = 0; e < calib_episodes; ++e) {
        env.reset(rng, cfg.train.placement_clearance);
        TerminalCause cause = TerminalCause::none;
        while (cause == TerminalCause::none) {
            const Vector obs = env.observation();
            states.push_back(obs);
            const auto a = deep_actor_forward(model.deep, obs);
            const auto speeds = decode_action(a, cfg.train.kinematics.v_min,
                                              cfg.train.kinematics.v_max);
            cause = env.step(speeds.left, speeds.right).cause;
        }
    }

    LifConfig lif = cfg.train.lif;
    lif.timesteps = timesteps;
    const auto result = dnn_snn_convert(model.deep, lif, states);
    save_san(result.params, lif, out_path);
    std::cout << "converted " << model_path << " -> " << out_path << " (T=" << timesteps
              << ", calibration error " << result.calibration_error << " over " << states.size()
              << " states)\n";
    return 0;
}

int cmd_bench(const std::vector<std::string>& report_paths, const std::string& out_dir) {
    std::vector<EvalReport> reports;
    for (const auto& p : report_paths) reports.push_back(load_eval_report(p));
    const auto table = bench_compare(reports);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/bench_table.csv", bench_table_csv(table));
    if (table.size() >= 2) {
        write_file(out_dir + "/outcomes.svg", outcome_chart_svg(table));
        write_file(out_dir + "/distance.svg", metric_chart_svg(table, "distance"));
        write_file(out_dir + "/speed.svg", metric_chart_svg(table, "speed"));
    }

    std::cout << bench_table_csv(table);
    std::cout << "table " << out_dir << "/bench_table.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking DDPG mapless navigation: train, evaluate, quantize, benchmark"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string preset = "desk";
    std::string config_path;
    std::string worlds_dir = SDDPG_DEFAULT_WORLDS_DIR;
    app.add_option("--preset", preset, "configuration preset: desk or paper");
    app.add_option("--config", config_path, "key = value overrides file");
    app.add_option("--worlds-dir", worlds_dir, "directory with .world files");

    auto* train = app.add_subcommand("train", "train actor and critic over the curriculum");
    std::string out_dir = "runs/out";
    std::string seeds_arg, resume_path, actor_kind_arg;
    train->add_option("--out-dir", out_dir, "run directory");
    train->add_option("--seeds", seeds_arg, "comma-separated seed list (default from preset)");
    train->add_option("--seed", seeds_arg, "single seed (alias of --seeds)");
    train->add_option("--actor", actor_kind_arg, "actor kind: san, deep, deep_poisson");
    train->add_option("--resume", resume_path, "checkpoint file to resume from");

    auto* eval = app.add_subcommand("eval", "evaluate a trained model on the test world");
    std::string model_path, method_name;
    bool poissonize = false, dump_traj = false;
    std::string eval_out = "runs/eval";
    std::uint64_t eval_seed_flag = 0;
    int eval_episodes_flag = 0;
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--out-dir", eval_out, "output directory");
    eval->add_option("--method", method_name, "method label in the report");
    eval->add_option("--seed", eval_seed_flag, "evaluation seed (start/goal set)");
    eval->add_option("--episodes", eval_episodes_flag, "episode count override");
    eval->add_flag("--poissonize", poissonize, "poissonize deep-actor inputs (DDPG-Poisson)");
    eval->add_flag("--dump-trajectories", dump_traj, "write per-step trajectory CSV");

    auto* quant = app.add_subcommand("quantize", "rescale a spiking actor to integer weights");
    std::string quant_out = "actor_quantized.model";
    int weight_max = 127;
    quant->add_option("--model", model_path, "spiking actor model")->required();
    quant->add_option("--out", quant_out, "output model file");
    quant->add_option("--weight-max", weight_max, "integer weight magnitude cap");

    auto* conv = app.add_subcommand("convert", "convert a deep actor to a spiking actor");
    std::string conv_out = "actor_converted.model";
    int conv_timesteps = 5;
    int conv_episodes = 20;
    std::uint64_t conv_seed = 1;
    conv->add_option("--model", model_path, "deep actor model")->required();
    conv->add_option("--out", conv_out, "output model file");
    conv->add_option("--timesteps", conv_timesteps, "inference window T");
    conv->add_option("--calib-episodes", conv_episodes, "episodes of recorded states");
    conv->add_option("--seed", conv_seed, "calibration rollout seed");

    auto* bench = app.add_subcommand("bench", "compare evaluation reports");
    std::vector<std::string> report_paths;
    std::string bench_out = "runs/bench";
    bench->add_option("--reports", report_paths, "eval report CSVs")->required()->delimiter(',');
    bench->add_option("--out-dir", bench_out, "output directory");

    auto* show = app.add_subcommand("show-config", "print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = resolve_config(preset, config_path);
        if (eval_seed_flag != 0) cfg.eval.seed = eval_seed_flag;
        if (eval_episodes_flag > 0) cfg.eval.episodes = eval_episodes_flag;
        if (!actor_kind_arg.empty()) cfg.train.actor_kind = actor_kind_from_string(actor_kind_arg);

        if (train->parsed()) {
            std::vector<std::uint64_t> seeds = cfg.seeds;
            if (!seeds_arg.empty()) {
                seeds.clear();
                std::istringstream is(seeds_arg);
                std::string item;
                while (std::getline(is, item, ',')) seeds.push_back(std::stoull(item));
            }
            return cmd_train(cfg, worlds_dir, out_dir, seeds, resume_path);
        }
        if (eval->parsed())
            return cmd_eval(cfg, worlds_dir, model_path, method_name, eval_out, poissonize,
                            dump_traj);
        if (quant->parsed()) return cmd_quantize(model_path, quant_out, weight_max);
        if (conv->parsed())
            return cmd_convert(cfg, worlds_dir, model_path, conv_out, conv_timesteps,
                               conv_episodes, conv_seed);
        if (bench->parsed()) return cmd_bench(report_paths, bench_out);
        if (show->parsed()) {
            std::cout << show_config(cfg);
            return 0;
        }
    } catch (const ProtocolViolation& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
