#pragma once

// Test-only geometry oracles: a fine-step ODE integrator for the unicycle
// model, a distance-field marcher for lidar ranges, and a boundary-sampling
// estimate of the obstacle distance. All independent of the analytic
// production paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "sddpg/sim.hpp"
#include "sddpg/world.hpp"

namespace oracle {

// Integrate dx/dt = v cos(theta), dy/dt = v sin(theta), dtheta/dt = omega
// over dt with `substeps` RK4 steps.
inline sddpg::Pose integrate_unicycle(const sddpg::Pose& pose, double v, double omega, double dt,
                                      int substeps) {
    double x = pose.x, y = pose.y, th = pose.theta;
    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        // theta evolves linearly, so the RK4 stages use exact headings
        const double k1x = v * std::cos(th);
        const double k1y = v * std::sin(th);
        const double thm = th + 0.5 * h * omega;
        const double k2x = v * std::cos(thm);
        const double k2y = v * std::sin(thm);
        const double the = th + h * omega;
        const double k4x = v * std::cos(the);
        const double k4y = v * std::sin(the);
        x += h / 6.0 * (k1x + 4.0 * k2x + k4x);
        y += h / 6.0 * (k1y + 4.0 * k2y + k4y);
        th = the;
    }
    return {x, y, th};
}

// Forward Euler variant, for the hand-checkable unit example.
inline sddpg::Pose integrate_unicycle_euler(const sddpg::Pose& pose, double v, double omega,
                                            double dt, int substeps) {
    double x = pose.x, y = pose.y, th = pose.theta;
    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        x += h * v * std::cos(th);
        y += h * v * std::sin(th);
        th += h * omega;
    }
    return {x, y, th};
}

// Distance-field march along a ray (sphere tracing): advance by the distance
// to the nearest surface until contact as an independent range measurement.
inline double march_ray(const sddpg::Point& origin, double angle, const sddpg::WorldSpec& world,
                        double max_range) {
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double s = 0.0;
    const auto segs = world.collision_segments();
    for (int iter = 0; iter < 2000000; ++iter) {
        const sddpg::Point p{origin.x + s * dx, origin.y + s * dy};
        double d = max_range;
        for (const auto& seg : segs) d = std::min(d, sddpg::point_segment_distance(p, seg));
        // contact threshold above the step floor, so the march can never
        // tunnel through a surface
        if (d < 2e-6) return s;
        s += d * 0.9;
        if (s >= max_range) return max_range;
    }
    return s;
}

// Densely sample every obstacle boundary and return the minimal distance.
inline double sampled_obstacle_distance(const sddpg::Point& p, const sddpg::WorldSpec& world,
                                        double sample_step = 1e-3) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : world.collision_segments()) {
        const double len = std::hypot(seg.b.x - seg.a.x, seg.b.y - seg.a.y);
        const int n = std::max(1, static_cast<int>(len / sample_step));
        for (int i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double qx = seg.a.x + t * (seg.b.x - seg.a.x);
            const double qy = seg.a.y + t * (seg.b.y - seg.a.y);
            best = std::min(best, std::hypot(p.x - qx, p.y - qy));
        }
    }
    return best;
}

}  // namespace oracle
