#pragma once

#include "sddpg/transition.hpp"

namespace sddpg {

struct RewardConfig {
    double goal_reward = 30.0;       // R_goal
    double obstacle_reward = -20.0;  // R_obstacle
    double amplification = 15.0;     // A
    double goal_threshold = 0.5;     // G_th, meters
    double obstacle_threshold = 0.35;  // O_th, meters
    // The printed shaping term A*(G_dis(t) - G_dis(t-1)) rewards retreat;
    // the default rewards approach. Set true to reproduce the printed form.
    bool literal_sign = false;

    void validate() const;
};

struct RewardResult {
    double value = 0.0;
    TerminalCause cause = TerminalCause::none;
};

// Exactly one branch fires per step; goal takes precedence over collision.
// Distances are read from the current state, the shaping term compares the
// goal distance across the two consecutive states.
RewardResult compute_reward(double prev_goal_distance, double goal_distance,
                            double obstacle_distance, const RewardConfig& cfg);

struct RobotState;
RewardResult compute_reward(const RobotState& prev, const RobotState& cur,
                            const RewardConfig& cfg);

}  // namespace sddpg
