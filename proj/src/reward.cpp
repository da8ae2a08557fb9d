#include "sddpg/reward.hpp"

#include <stdexcept>

#include "sddpg/sim.hpp"

namespace sddpg {

void RewardConfig::validate() const {
    if (!(goal_reward > 0.0) || !(obstacle_reward < 0.0))
        throw std::invalid_argument("RewardConfig: need R_goal > 0 > R_obstacle");
    if (!(goal_threshold > 0.0) || !(obstacle_threshold > 0.0))
        throw std::invalid_argument("RewardConfig: thresholds must be positive");
}

RewardResult compute_reward(double prev_goal_distance, double goal_distance,
                            double obstacle_distance, const RewardConfig& cfg) {
    if (goal_distance < cfg.goal_threshold)
        return {cfg.goal_reward, TerminalCause::goal};
    if (obstacle_distance < cfg.obstacle_threshold)
        return {cfg.obstacle_reward, TerminalCause::collision};
    const double delta = cfg.literal_sign ? goal_distance - prev_goal_distance
                                          : prev_goal_distance - goal_distance;
    return {cfg.amplification * delta, TerminalCause::none};
}

RewardResult compute_reward(const RobotState& prev, const RobotState& cur,
                            const RewardConfig& cfg) {
    return compute_reward(prev.goal_distance, cur.goal_distance, cur.obstacle_distance, cfg);
}

}  // namespace sddpg
