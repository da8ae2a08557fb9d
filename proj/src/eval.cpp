#include "sddpg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sddpg/parallel.hpp"

namespace sddpg {

double Heatmap::value(int cx, int cy) const {
    const long c = crossings[static_cast<std::size_t>(cy) * cols + cx];
    if (c == 0) return -1.0;
    const long s = successes[static_cast<std::size_t>(cy) * cols + cx];
    return static_cast<double>(s) / static_cast<double>(c);
}

double EvalReport::success_rate() const {
    if (episodes.empty()) return 0.0;
    long n = 0;
    for (const auto& e : episodes) n += e.outcome == TerminalCause::goal ? 1 : 0;
    return static_cast<double>(n) / episodes.size();
}

double EvalReport::collision_rate() const {
    if (episodes.empty()) return 0.0;
    long n = 0;
    for (const auto& e : episodes) n += e.outcome == TerminalCause::collision ? 1 : 0;
    return static_cast<double>(n) / episodes.size();
}

double EvalReport::timeout_rate() const {
    if (episodes.empty()) return 0.0;
    long n = 0;
    for (const auto& e : episodes) n += e.outcome == TerminalCause::timeout ? 1 : 0;
    return static_cast<double>(n) / episodes.size();
}

std::vector<EpisodeSetup> make_eval_pairs(const WorldSpec& world, const EvalConfig& cfg) {
    WorldSpec w = world;
    if (cfg.min_separation > 0.0) w.min_separation = cfg.min_separation;
    Rng rng(Rng::mix(cfg.seed, 0x70616972));
    std::vector<EpisodeSetup> pairs;
    pairs.reserve(cfg.episodes);
    for (int i = 0; i < cfg.episodes; ++i)
        pairs.push_back(sample_episode(w, rng, cfg.placement_clearance));
    return pairs;
}

std::uint64_t eval_pairs_hash(const std::vector<EpisodeSetup>& pairs) {
    // FNV-1a over the exact bit patterns of every coordinate.
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& p : pairs) {
        feed(p.start.x);
        feed(p.start.y);
        feed(p.start.theta);
        feed(p.goal.x);
        feed(p.goal.y);
    }
    return h;
}

namespace {

struct EpisodeOutput {
    EpisodeRecord record;
    std::set<std::pair<int, int>> cells;
    std::string trajectory;
};

EpisodeOutput run_episode(int index, const EpisodeSetup& setup, const WorldSpec& world,
                          const KinematicsConfig& kcfg, const RewardConfig& rcfg,
                          const ObservationConfig& ocfg, const PolicyFn& policy,
                          const EvalConfig& cfg, bool want_trajectory) {
    SimEnv env(world, kcfg, rcfg, ocfg, cfg.max_steps);
    env.reset(setup);
    Rng rng(Rng::mix(cfg.seed, 0x657069, static_cast<std::uint64_t>(index)));

    EpisodeOutput out;
    out.record.index = index;
    out.record.start = setup.start;
    out.record.goal = setup.goal;

    auto cell_of = [&](double x, double y) {
        return std::pair<int, int>{static_cast<int>(std::floor(x / cfg.heatmap_cell)),
                                   static_cast<int>(std::floor(y / cfg.heatmap_cell))};
    };
    out.cells.insert(cell_of(setup.start.x, setup.start.y));

    std::ostringstream traj;
    TerminalCause cause = TerminalCause::none;
    while (cause == TerminalCause::none) {
        const Vector obs = env.observation();
        const auto action = policy(obs, rng);
        const auto speeds = decode_action({action[0], action[1]}, kcfg.v_min, kcfg.v_max);
        const auto res = env.step(speeds.left, speeds.right);

        const auto& st = env.state();
        out.record.route_length += std::abs(st.linear_vel) * kcfg.dt;
        out.record.episode_return += res.reward;
        out.cells.insert(cell_of(st.pose.x, st.pose.y));
        if (want_trajectory) {
            char line[160];
            std::snprintf(line, sizeof(line), "%ld,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n",
                          env.steps() - 1, st.pose.x, st.pose.y, st.pose.theta, speeds.left,
                          speeds.right, res.reward, to_string(res.cause));
            traj << line;
        }
        cause = res.cause;
    }
    out.record.outcome = cause;
    out.record.steps = env.steps();
    out.record.mean_speed =
        out.record.steps > 0 ? out.record.route_length / (out.record.steps * kcfg.dt) : 0.0;
    out.trajectory = traj.str();
    return out;
}

}  // namespace

EvalReport evaluate_policy_with_trajectories(const std::string& method, const WorldSpec& world,
                                             const KinematicsConfig& kcfg,
                                             const RewardConfig& rcfg,
                                             const ObservationConfig& ocfg,
                                             const PolicyFn& policy, const EvalConfig& cfg,
                                             bool parallel, TrajectoryDump* dump) {
    const auto pairs = make_eval_pairs(world, cfg);

    EvalReport report;
    report.method = method;
    report.world_name = world.name;
    report.pairs_hash = eval_pairs_hash(pairs);

    report.heatmap.cell = cfg.heatmap_cell;
    report.heatmap.cols = static_cast<int>(std::ceil(world.width / cfg.heatmap_cell));
    report.heatmap.rows = static_cast<int>(std::ceil(world.height / cfg.heatmap_cell));
    report.heatmap.crossings.assign(
        static_cast<std::size_t>(report.heatmap.cols) * report.heatmap.rows, 0);
    report.heatmap.successes.assign(report.heatmap.crossings.size(), 0);

    std::vector<EpisodeOutput> outputs(pairs.size());
    parallel_for(static_cast<int>(pairs.size()), parallel, [&](int i) {
        outputs[i] = run_episode(i, pairs[i], world, kcfg, rcfg, ocfg, policy, cfg,
                                 dump != nullptr);
    });

    // deterministic assembly in episode order
    std::ostringstream all_traj;
    if (dump) all_traj << "# trajectory v1\nstep,x,y,theta,v_left,v_right,reward,outcome\n";
    for (auto& out : outputs) {
        report.episodes.push_back(out.record);
        const bool success = out.record.outcome == TerminalCause::goal;
        for (const auto& [cx, cy] : out.cells) {
            if (cx < 0 || cy < 0 || cx >= report.heatmap.cols || cy >= report.heatmap.rows)
                continue;
            const std::size_t idx = static_cast<std::size_t>(cy) * report.heatmap.cols + cx;
            report.heatmap.crossings[idx]++;
            if (success) report.heatmap.successes[idx]++;
        }
        if (dump) {
            all_traj << "# episode " << out.record.index << "\n";
            all_traj << out.trajectory;
        }
    }
    if (dump) dump->csv = all_traj.str();
    return report;
}

EvalReport evaluate_policy(const std::string& method, const WorldSpec& world,
                           const KinematicsConfig& kcfg, const RewardConfig& rcfg,
                           const ObservationConfig& ocfg, const PolicyFn& policy,
                           const EvalConfig& cfg, bool parallel) {
    return evaluate_policy_with_trajectories(method, world, kcfg, rcfg, ocfg, policy, cfg,
                                             parallel, nullptr);
}

std::string eval_report_csv(const EvalReport& report) {
    std::ostringstream os;
    char buf[512];
    os << "# eval-report v1\n";
    std::snprintf(buf, sizeof(buf), "# method,%s\n# world,%s\n# pairs_hash,%016llx\n# T,%d\n",
                  report.method.c_str(), report.world_name.c_str(),
                  static_cast<unsigned long long>(report.pairs_hash), report.timesteps);
    os << buf;
    os << "episode,outcome,steps,route_length,mean_speed,return,start_x,start_y,start_theta,"
          "goal_x,goal_y\n";
    for (const auto& e : report.episodes) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%ld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      e.index, to_string(e.outcome), e.steps, e.route_length, e.mean_speed,
                      e.episode_return, e.start.x, e.start.y, e.start.theta, e.goal.x, e.goal.y);
        os << buf;
    }
    return os.str();
}

namespace {

TerminalCause cause_from_string(const std::string& s) {
    if (s == "goal") return TerminalCause::goal;
    if (s == "collision") return TerminalCause::collision;
    if (s == "timeout") return TerminalCause::timeout;
    if (s == "none") return TerminalCause::none;
    throw std::invalid_argument("unknown outcome: " + s);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

EvalReport parse_eval_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "# eval-report v1")
        throw std::invalid_argument("eval report: bad header");

    EvalReport report;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto fields = split_csv(line.substr(2));
            if (fields.size() == 2 && fields[0] == "method") report.method = fields[1];
            if (fields.size() == 2 && fields[0] == "world") report.world_name = fields[1];
            if (fields.size() == 2 && fields[0] == "pairs_hash")
                report.pairs_hash = std::stoull(fields[1], nullptr, 16);
            if (fields.size() == 2 && fields[0] == "T") report.timesteps = std::stoi(fields[1]);
            continue;
        }
        if (!saw_columns) {  // column header row
            saw_columns = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 11) throw std::invalid_argument("eval report: bad row: " + line);
        EpisodeRecord e;
        e.index = std::stoi(f[0]);
        e.outcome = cause_from_string(f[1]);
        e.steps = std::stol(f[2]);
        e.route_length = std::stod(f[3]);
        e.mean_speed = std::stod(f[4]);
        e.episode_return = std::stod(f[5]);
        e.start = {std::stod(f[6]), std::stod(f[7]), std::stod(f[8])};
        e.goal = {std::stod(f[9]), std::stod(f[10])};
        report.episodes.push_back(e);
    }
    return report;
}

void save_eval_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write eval report: " + path);
    out << eval_report_csv(report);
}

EvalReport load_eval_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open eval report: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_eval_report_csv(ss.str());
}

std::string heatmap_csv(const Heatmap& map) {
    std::ostringstream os;
    os << "# heatmap v1\ncell_x,cell_y,crossings,successes,rate\n";
    char buf[128];
    for (int cy = 0; cy < map.rows; ++cy)
        for (int cx = 0; cx < map.cols; ++cx) {
            const std::size_t idx = static_cast<std::size_t>(cy) * map.cols + cx;
            if (map.crossings[idx] == 0) continue;
            std::snprintf(buf, sizeof(buf), "%d,%d,%ld,%ld,%.6f\n", cx, cy, map.crossings[idx],
                          map.successes[idx], map.value(cx, cy));
            os << buf;
        }
    return os.str();
}

}  // namespace sddpg
