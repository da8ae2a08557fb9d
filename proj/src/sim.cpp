#include "sddpg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sddpg {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace

KinematicsResult step_kinematics(const Pose& pose, double v_left, double v_right,
                                 const KinematicsConfig& cfg) {
    const double v = 0.5 * (v_left + v_right);
    const double omega = (v_right - v_left) / cfg.wheel_separation;

    KinematicsResult out;
    out.linear_vel = v;
    out.angular_vel = omega;

    const double dt = cfg.dt;
    if (std::abs(omega) < 1e-9) {
        out.pose.x = pose.x + v * std::cos(pose.theta) * dt;
        out.pose.y = pose.y + v * std::sin(pose.theta) * dt;
        out.pose.theta = pose.theta;
    } else {
        const double radius = v / omega;
        const double theta_new = pose.theta + omega * dt;
        out.pose.x = pose.x + radius * (std::sin(theta_new) - std::sin(pose.theta));
        out.pose.y = pose.y - radius * (std::cos(theta_new) - std::cos(pose.theta));
        out.pose.theta = wrap_angle(theta_new);
    }
    return out;
}

std::vector<double> raycast(const Pose& pose, const WorldSpec& world, const LidarConfig& cfg) {
    const auto segs = world.collision_segments();
    std::vector<double> ranges(cfg.beams, cfg.max_range);
    const double step = cfg.fov / cfg.beams;
    for (int i = 0; i < cfg.beams; ++i) {
        const double angle = pose.theta - 0.5 * cfg.fov + (i + 0.5) * step;
        const double dx = std::cos(angle);
        const double dy = std::sin(angle);
        double best = cfg.max_range;
        for (const auto& s : segs) {
            const double t = ray_segment_intersection({pose.x, pose.y}, dx, dy, s);
            if (t >= 0.0 && t < best) best = t;
        }
        ranges[i] = std::clamp(best, cfg.min_range, cfg.max_range);
    }
    return ranges;
}

CollisionInfo check_collision(const Pose& pose, const WorldSpec& world, double threshold) {
    CollisionInfo info;
    info.distance = world.obstacle_distance({pose.x, pose.y});
    info.collided = info.distance < threshold;
    return info;
}

Vector make_observation(const RobotState& state, const KinematicsConfig& kcfg,
                        const ObservationConfig& ocfg, double world_diagonal,
                        ObservationDiagnostics* diag) {
    const double dist_cap =
        ocfg.goal_distance_cap > 0.0 ? ocfg.goal_distance_cap : world_diagonal;

    auto clamp01 = [&](double v) {
        if (v < 0.0 || v > 1.0) {
            if (diag) ++diag->clamped;
            return std::clamp(v, 0.0, 1.0);
        }
        return v;
    };

    Vector obs;
    obs.reserve(6 + state.lidar.size());
    obs.push_back(clamp01(state.goal_distance / dist_cap));
    obs.push_back(clamp01(std::max(state.goal_direction, 0.0) / kPi));
    obs.push_back(clamp01(std::max(-state.goal_direction, 0.0) / kPi));
    obs.push_back(clamp01((state.linear_vel - kcfg.v_min) / (kcfg.v_max - kcfg.v_min)));
    const double w_max = kcfg.omega_max();
    obs.push_back(clamp01(std::max(state.angular_vel, 0.0) / w_max));
    obs.push_back(clamp01(std::max(-state.angular_vel, 0.0) / w_max));
    const double lo = kcfg.lidar.min_range;
    const double hi = kcfg.lidar.max_range;
    for (double r : state.lidar) obs.push_back(clamp01((r - lo) / (hi - lo)));
    return obs;
}

EpisodeSetup sample_episode(const WorldSpec& world, Rng& rng, double clearance) {
    auto sample_point = [&](const std::vector<Rect>& regions) {
        double total = 0.0;
        for (const auto& r : regions) total += std::max(r.area(), 1e-12);
        double pick = rng.uniform() * total;
        for (const auto& r : regions) {
            pick -= std::max(r.area(), 1e-12);
            if (pick <= 0.0) return r.sample(rng);
        }
        return regions.back().sample(rng);
    };

    const int max_attempts = 10000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const Point start = sample_point(world.start_regions);
        const Point goal = sample_point(world.goal_regions);
        if (!world.inside_bounds(start) || !world.inside_bounds(goal)) continue;
        if (std::hypot(goal.x - start.x, goal.y - start.y) < world.min_separation) continue;
        if (world.obstacle_distance(start) < clearance) continue;
        if (world.obstacle_distance(goal) < clearance) continue;
        EpisodeSetup setup;
        setup.start = {start.x, start.y, rng.uniform(-kPi, kPi)};
        setup.goal = goal;
        return setup;
    }
    throw std::invalid_argument(
        "sample_episode: no valid start/goal placement after bounded attempts");
}

SimEnv::SimEnv(WorldSpec world, KinematicsConfig kcfg, RewardConfig rcfg, ObservationConfig ocfg,
               long max_steps)
    : world_(std::move(world)), kcfg_(kcfg), rcfg_(rcfg), ocfg_(ocfg), max_steps_(max_steps) {
    world_.validate();
    rcfg_.validate();
}

void SimEnv::sense() {
    const Point p{state_.pose.x, state_.pose.y};
    state_.goal_distance = std::hypot(goal_.x - p.x, goal_.y - p.y);
    state_.goal_direction =
        wrap_angle(std::atan2(goal_.y - p.y, goal_.x - p.x) - state_.pose.theta);
    state_.lidar = raycast(state_.pose, world_, kcfg_.lidar);
    state_.obstacle_distance = world_.obstacle_distance(p);
}

void SimEnv::reset(const EpisodeSetup& setup) {
    state_ = RobotState{};
    state_.pose = setup.start;
    goal_ = setup.goal;
    steps_ = 0;
    sense();
}

EpisodeSetup SimEnv::reset(Rng& rng, double clearance) {
    const auto setup = sample_episode(world_, rng, clearance);
    reset(setup);
    return setup;
}

SimEnv::StepResult SimEnv::step(double v_left, double v_right) {
    const double prev_goal_distance = state_.goal_distance;
    const auto kin = step_kinematics(state_.pose, v_left, v_right, kcfg_);
    state_.pose = kin.pose;
    state_.linear_vel = kin.linear_vel;
    state_.angular_vel = kin.angular_vel;
    sense();
    ++steps_;

    StepResult res;
    const auto reward = compute_reward(prev_goal_distance, state_.goal_distance,
                                       state_.obstacle_distance, rcfg_);
    res.reward = reward.value;
    res.cause = reward.cause;
    if (res.cause == TerminalCause::none && steps_ >= max_steps_)
        res.cause = TerminalCause::timeout;
    return res;
}

Vector SimEnv::observation(ObservationDiagnostics* diag) const {
    return make_observation(state_, kcfg_, ocfg_, world_.diagonal(), diag);
}

}  // namespace sddpg
