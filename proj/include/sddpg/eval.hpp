#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sddpg/ddpg.hpp"
#include "sddpg/sim.hpp"

namespace sddpg {

struct EvalConfig {
    int episodes = 50;
    std::uint64_t seed = 1;
    long max_steps = 1000;
    double placement_clearance = 0.5;
    double min_separation = 0.0;  // 0: keep the world's own separation
    double heatmap_cell = 1.0;    // meters
};

// A policy maps a normalized observation to a [0,1]^2 action. Must be pure
// over shared state; episodes run concurrently.
using PolicyFn = std::function<std::array<double, 2>(const Vector& obs, Rng& rng)>;

struct EpisodeRecord {
    int index = 0;
    TerminalCause outcome = TerminalCause::timeout;
    long steps = 0;
    double route_length = 0.0;  // arc length, meters
    double mean_speed = 0.0;    // route_length / (steps * dt)
    double episode_return = 0.0;
    Pose start;
    Point goal;
};

// Crossing-success grid: value = successful crossings / total crossings of
// each cell, counted once per episode.
struct Heatmap {
    int cols = 0;
    int rows = 0;
    double cell = 1.0;
    std::vector<long> crossings;
    std::vector<long> successes;

    double value(int cx, int cy) const;  // -1 when never crossed
};

struct EvalReport {
    std::string method;
    std::string world_name;
    std::uint64_t pairs_hash = 0;
    int timesteps = 0;  // actor T, informational
    std::vector<EpisodeRecord> episodes;
    Heatmap heatmap;

    double success_rate() const;
    double collision_rate() const;
    double timeout_rate() const;
};

// The shared evaluation protocol: the start/goal list is generated once per
// (world, seed, episodes, separation) and must be reused across methods.
std::vector<EpisodeSetup> make_eval_pairs(const WorldSpec& world, const EvalConfig& cfg);
std::uint64_t eval_pairs_hash(const std::vector<EpisodeSetup>& pairs);

EvalReport evaluate_policy(const std::string& method, const WorldSpec& world,
                           const KinematicsConfig& kcfg, const RewardConfig& rcfg,
                           const ObservationConfig& ocfg, const PolicyFn& policy,
                           const EvalConfig& cfg, bool parallel = true);

// Report CSV (versioned schema) and its parser; bench reads these back.
std::string eval_report_csv(const EvalReport& report);
EvalReport parse_eval_report_csv(const std::string& text);
void save_eval_report(const EvalReport& report, const std::string& path);
EvalReport load_eval_report(const std::string& path);

std::string heatmap_csv(const Heatmap& map);

// Trajectory dump: t,x,y,theta,v_left,v_right,reward,outcome rows.
struct TrajectoryDump {
    std::string csv;
};
EvalReport evaluate_policy_with_trajectories(const std::string& method, const WorldSpec& world,
                                             const KinematicsConfig& kcfg,
                                             const RewardConfig& rcfg,
                                             const ObservationConfig& ocfg,
                                             const PolicyFn& policy, const EvalConfig& cfg,
                                             bool parallel, TrajectoryDump* dump);

}  // namespace sddpg
