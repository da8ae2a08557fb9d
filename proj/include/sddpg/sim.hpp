#pragma once

#include <array>
#include <optional>

#include "sddpg/numeric.hpp"
#include "sddpg/reward.hpp"
#include "sddpg/rng.hpp"
#include "sddpg/world.hpp"

namespace sddpg {

struct LidarConfig {
    int beams = 18;
    double fov = 3.14159265358979323846;  // front-facing 180 degrees
    double min_range = 0.2;
    double max_range = 40.0;
};

struct KinematicsConfig {
    double wheel_separation = 0.23;  // Turtlebot2-class geometry
    double robot_radius = 0.175;
    double dt = 0.1;  // one execution step
    double v_min = 0.05;
    double v_max = 0.5;
    LidarConfig lidar;

    double omega_max() const { return (v_max - v_min) / wheel_separation; }
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // (-pi, pi]
};

// The simulator-side robot state: pose plus everything the observation needs.
struct RobotState {
    Pose pose;
    double linear_vel = 0.0;   // nu, m/s
    double angular_vel = 0.0;  // omega, rad/s
    double goal_distance = 0.0;
    double goal_direction = 0.0;  // rad in (-pi, pi], relative to heading
    std::vector<double> lidar;    // beams, right to left
    double obstacle_distance = 0.0;
};

// Exact arc integration of the differential drive over one dt.
struct KinematicsResult {
    Pose pose;
    double linear_vel = 0.0;
    double angular_vel = 0.0;
};
KinematicsResult step_kinematics(const Pose& pose, double v_left, double v_right,
                                 const KinematicsConfig& cfg);

// Analytic nearest-intersection ranges over the front-facing fan, clamped to
// the sensor limits. Beam i points at theta - fov/2 + (i + 0.5) * fov / beams.
std::vector<double> raycast(const Pose& pose, const WorldSpec& world, const LidarConfig& cfg);

struct CollisionInfo {
    bool collided = false;
    double distance = 0.0;  // O_dis, meters to nearest obstacle surface
};
CollisionInfo check_collision(const Pose& pose, const WorldSpec& world, double threshold);

// Channel normalization caps for the encoder.
struct ObservationConfig {
    double goal_distance_cap = 0.0;  // 0 means: use the world diagonal
};

struct ObservationDiagnostics {
    long clamped = 0;  // raw values that fell outside their declared range
};

// Fixed channel layout (v1): [G_dis, G_dir+, G_dir-, nu, omega+, omega-,
// S_0..S_{beams-1}], every channel affinely mapped to [0,1]. Signed inputs
// are split into nonnegative half channels so they can drive spike rates.
Vector make_observation(const RobotState& state, const KinematicsConfig& kcfg,
                        const ObservationConfig& ocfg, double world_diagonal,
                        ObservationDiagnostics* diag = nullptr);

inline int observation_channels(const KinematicsConfig& kcfg) { return 6 + kcfg.lidar.beams; }

struct EpisodeSetup {
    Pose start;
    Point goal;
};

// Rejection-sample a start pose and goal point honoring separation and
// clearance. Throws after a bounded number of failed attempts.
EpisodeSetup sample_episode(const WorldSpec& world, Rng& rng, double clearance);

// One rollout environment; owns the robot state between execution steps.
class SimEnv {
  public:
    SimEnv(WorldSpec world, KinematicsConfig kcfg, RewardConfig rcfg, ObservationConfig ocfg,
           long max_steps);

    // Place the robot; computes the initial sensor state.
    void reset(const EpisodeSetup& setup);
    // Sample placement, then reset.
    EpisodeSetup reset(Rng& rng, double clearance);

    struct StepResult {
        double reward = 0.0;
        TerminalCause cause = TerminalCause::none;
    };
    // Apply wheel speeds for one 0.1 s execution step. Timeout fires at
    // exactly max_steps.
    StepResult step(double v_left, double v_right);

    const RobotState& state() const { return state_; }
    const Point& goal() const { return goal_; }
    long steps() const { return steps_; }
    const WorldSpec& world() const { return world_; }
    Vector observation(ObservationDiagnostics* diag = nullptr) const;

  private:
    void sense();

    WorldSpec world_;
    KinematicsConfig kcfg_;
    RewardConfig rcfg_;
    ObservationConfig ocfg_;
    long max_steps_ = 1000;
    RobotState state_;
    Point goal_;
    long steps_ = 0;
};

}  // namespace sddpg
