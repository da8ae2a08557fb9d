#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_geometry.hpp"
#include "sddpg/reward.hpp"
#include "sddpg/sim.hpp"
#include "sddpg/world.hpp"

using namespace sddpg;

namespace {

WorldSpec empty_world(double w = 20.0, double h = 20.0) {
    WorldSpec world;
    world.width = w;
    world.height = h;
    world.start_regions = {{1.0, 1.0, w - 2.0, h - 2.0}};
    world.goal_regions = {{1.0, 1.0, w - 2.0, h - 2.0}};
    world.min_separation = 6.0;
    return world;
}

WorldSpec random_world(std::uint64_t seed) {
    Rng rng(seed);
    WorldSpec world = empty_world(15.0, 15.0);
    const int boxes = 2 + static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < boxes; ++i) {
        const double bw = rng.uniform(0.5, 2.5);
        const double bh = rng.uniform(0.5, 2.5);
        world.obstacles.push_back(
            make_box(rng.uniform(2.0, 12.0 - bw), rng.uniform(2.0, 12.0 - bh), bw, bh));
    }
    world.obstacles.push_back(make_wall({rng.uniform(2.0, 12.0), rng.uniform(2.0, 12.0)},
                                        {rng.uniform(2.0, 12.0), rng.uniform(2.0, 12.0)}));
    return world;
}

}  // namespace

TEST_CASE("step_kinematics: equal wheels drive straight") {
    KinematicsConfig cfg;
    const auto out = step_kinematics({2.0, 3.0, 0.0}, 0.5, 0.5, cfg);
    CHECK(out.pose.x == doctest::Approx(2.05));
    CHECK(out.pose.y == doctest::Approx(3.0));
    CHECK(out.pose.theta == doctest::Approx(0.0));
    CHECK(out.linear_vel == doctest::Approx(0.5));
    CHECK(out.angular_vel == doctest::Approx(0.0));
}

TEST_CASE("step_kinematics: opposite wheels rotate in place") {
    KinematicsConfig cfg;
    const auto out = step_kinematics({1.0, 1.0, 0.5}, -0.2, 0.2, cfg);
    CHECK(out.linear_vel == doctest::Approx(0.0));
    CHECK(out.pose.x == doctest::Approx(1.0));
    CHECK(out.pose.y == doctest::Approx(1.0));
    CHECK(out.angular_vel == doctest::Approx(0.4 / cfg.wheel_separation));
    CHECK(out.pose.theta == doctest::Approx(0.5 + 0.4 / cfg.wheel_separation * 0.1));
}

TEST_CASE("step_kinematics: arc matches the fine-step Euler oracle on the spec case") {
    KinematicsConfig cfg;
    const Pose start{5.0, 5.0, 0.3};
    const auto out = step_kinematics(start, 0.1, 0.3, cfg);
    CHECK(out.angular_vel == doctest::Approx(0.86956521739).epsilon(1e-9));
    const auto ref = oracle::integrate_unicycle_euler(start, out.linear_vel, out.angular_vel,
                                                      cfg.dt, 1000);
    CHECK(std::abs(out.pose.x - ref.x) < 1e-6);
    CHECK(std::abs(out.pose.y - ref.y) < 1e-6);
}

TEST_CASE("step_kinematics: arc matches RK4 fine-step integration on random commands") {
    KinematicsConfig cfg;
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Pose start{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                         rng.uniform(-3.1, 3.1)};
        const double vl = rng.uniform(cfg.v_min, cfg.v_max);
        const double vr = rng.uniform(cfg.v_min, cfg.v_max);
        const auto out = step_kinematics(start, vl, vr, cfg);
        const auto ref =
            oracle::integrate_unicycle(start, out.linear_vel, out.angular_vel, cfg.dt, 1000);
        CHECK(std::abs(out.pose.x - ref.x) < 1e-6);
        CHECK(std::abs(out.pose.y - ref.y) < 1e-6);
    }
}

TEST_CASE("step_kinematics: displacement never exceeds v_max * dt") {
    KinematicsConfig cfg;
    Rng rng(18);
    for (int i = 0; i < 100; ++i) {
        const Pose start{5.0, 5.0, rng.uniform(-3.0, 3.0)};
        const double vl = rng.uniform(cfg.v_min, cfg.v_max);
        const double vr = rng.uniform(cfg.v_min, cfg.v_max);
        const auto out = step_kinematics(start, vl, vr, cfg);
        const double moved = std::hypot(out.pose.x - start.x, out.pose.y - start.y);
        CHECK(moved <= cfg.v_max * cfg.dt + 1e-12);
    }
}

TEST_CASE("raycast: forward-facing beams in an empty world hit the far wall") {
    const auto world = empty_world(20.0, 20.0);
    LidarConfig lidar;
    const Pose pose{10.0, 10.0, 0.0};
    const auto ranges = raycast(pose, world, lidar);
    REQUIRE(ranges.size() == 18);
    // Beam angles are sector centers: -85..85 deg. The two central beams
    // (+-5 deg) hit the +x wall at 10/cos(5 deg).
    const double expect = 10.0 / std::cos(5.0 * 3.14159265358979323846 / 180.0);
    CHECK(ranges[8] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(ranges[9] == doctest::Approx(expect).epsilon(1e-9));
    // Extreme beams (+-85 deg) hit the side walls at 10/cos(5 deg) as well.
    CHECK(ranges[0] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(ranges[17] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("raycast: perpendicular wall one meter ahead") {
    WorldSpec world = empty_world(20.0, 20.0);
    world.obstacles.push_back(make_wall({11.0, 0.0}, {11.0, 20.0}));
    LidarConfig lidar;
    const Pose pose{10.0, 10.0, 0.0};
    const auto ranges = raycast(pose, world, lidar);
    const double expect = 1.0 / std::cos(5.0 * 3.14159265358979323846 / 180.0);
    CHECK(ranges[8] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("raycast: ranges always clamped to sensor limits") {
    WorldSpec world = empty_world(60.0, 60.0);
    world.obstacles.push_back(make_box(30.05, 29.0, 1.0, 2.0));  // nearly touching
    LidarConfig lidar;
    const auto ranges = raycast({30.0, 30.0, 0.0}, world, lidar);
    for (double r : ranges) {
        CHECK(r >= lidar.min_range);
        CHECK(r <= lidar.max_range);
    }
}

TEST_CASE("raycast: mirror-symmetric world gives a mirror-symmetric scan") {
    WorldSpec world = empty_world(20.0, 20.0);
    // obstacles symmetric about y = 10
    world.obstacles.push_back(make_box(13.0, 12.0, 2.0, 1.0));
    world.obstacles.push_back(make_box(13.0, 7.0, 2.0, 1.0));
    const Pose pose{5.0, 10.0, 0.0};
    const auto ranges = raycast(pose, world, LidarConfig{});
    for (int i = 0; i < 9; ++i)
        CHECK(ranges[i] == doctest::Approx(ranges[17 - i]).epsilon(1e-9));
}

TEST_CASE("raycast: agrees with the distance-march oracle on random scenes") {
    LidarConfig lidar;
    Rng rng(23);
    for (std::uint64_t scene = 0; scene < 20; ++scene) {
        const auto world = random_world(scene);
        Pose pose;
        do {
            pose = {rng.uniform(1.0, 14.0), rng.uniform(1.0, 14.0), rng.uniform(-3.1, 3.1)};
        } while (world.obstacle_distance({pose.x, pose.y}) < 0.3);
        const auto ranges = raycast(pose, world, lidar);
        const double step = lidar.fov / lidar.beams;
        for (int i = 0; i < lidar.beams; i += 3) {
            const double angle = pose.theta - 0.5 * lidar.fov + (i + 0.5) * step;
            const double ref = oracle::march_ray({pose.x, pose.y}, angle, world, lidar.max_range);
            const double clamped = std::clamp(ref, lidar.min_range, lidar.max_range);
            CHECK(std::abs(ranges[i] - clamped) < 1e-3);
        }
    }
}

TEST_CASE("check_collision: thresholds and distances") {
    WorldSpec world = empty_world(20.0, 20.0);
    world.obstacles.push_back(make_box(10.0, 10.0, 2.0, 2.0));

    const auto far = check_collision({5.0, 5.0, 0.0}, world, 0.35);
    CHECK_FALSE(far.collided);
    CHECK(far.distance == doctest::Approx(5.0));  // nearest surface is the boundary wall

    // center 0.30 m left of the box face, O_th = 0.35
    const auto near_wall = check_collision({9.70, 11.0, 0.0}, world, 0.35);
    CHECK(near_wall.collided);
    CHECK(near_wall.distance == doctest::Approx(0.30));
}

TEST_CASE("check_collision: agrees with the boundary-sampling oracle") {
    Rng rng(29);
    for (std::uint64_t scene = 0; scene < 10; ++scene) {
        const auto world = random_world(100 + scene);
        for (int i = 0; i < 5; ++i) {
            const Point p{rng.uniform(0.5, 14.5), rng.uniform(0.5, 14.5)};
            bool inside = false;
            for (const auto& ob : world.obstacles) inside = inside || ob.contains(p);
            if (inside) continue;
            const double analytic = world.obstacle_distance(p);
            const double sampled = oracle::sampled_obstacle_distance(p, world);
            CHECK(std::abs(analytic - sampled) < 1e-3);
        }
    }
}

TEST_CASE("make_observation: sign split of a zero goal direction") {
    RobotState st;
    st.goal_direction = 0.0;
    st.goal_distance = 5.0;
    st.lidar.assign(18, 10.0);
    KinematicsConfig kcfg;
    const auto obs = make_observation(st, kcfg, {}, 20.0);
    CHECK(obs[1] == 0.0);
    CHECK(obs[2] == 0.0);
}

TEST_CASE("make_observation: lidar endpoints map to 0 and 1") {
    RobotState st;
    st.goal_distance = 1.0;
    st.lidar.assign(18, 40.0);
    st.lidar[0] = 0.2;
    KinematicsConfig kcfg;
    const auto obs = make_observation(st, kcfg, {}, 20.0);
    CHECK(obs[6] == doctest::Approx(0.0));
    CHECK(obs[7] == doctest::Approx(1.0));
}

TEST_CASE("make_observation: goal distance uses the configured cap") {
    RobotState st;
    st.goal_distance = 6.0;
    st.lidar.assign(18, 10.0);
    KinematicsConfig kcfg;
    ObservationConfig ocfg;
    ocfg.goal_distance_cap = 20.0;
    const auto obs = make_observation(st, kcfg, ocfg, 99.0);
    CHECK(obs[0] == doctest::Approx(0.3));
}

TEST_CASE("make_observation: every channel lies in [0,1], clamps are flagged") {
    Rng rng(31);
    KinematicsConfig kcfg;
    ObservationDiagnostics diag;
    for (int i = 0; i < 100; ++i) {
        RobotState st;
        st.goal_distance = rng.uniform(0.0, 40.0);
        st.goal_direction = rng.uniform(-4.0, 4.0);
        st.linear_vel = rng.uniform(-0.2, 0.8);
        st.angular_vel = rng.uniform(-3.0, 3.0);
        st.lidar.assign(18, 0.0);
        for (double& r : st.lidar) r = rng.uniform(0.0, 45.0);
        const auto obs = make_observation(st, kcfg, {}, 28.28, &diag);
        CHECK(obs.size() == 24);
        for (double v : obs) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(diag.clamped > 0);  // the sweep intentionally strays out of range
}

TEST_CASE("sample_episode: degenerate point regions return exactly those points") {
    WorldSpec world = empty_world(20.0, 20.0);
    world.start_regions = {{2.0, 2.0, 0.0, 0.0}};
    world.goal_regions = {{9.0, 2.0, 0.0, 0.0}};
    world.min_separation = 6.0;
    Rng rng(37);
    const auto setup = sample_episode(world, rng, 0.4);
    CHECK(setup.start.x == doctest::Approx(2.0));
    CHECK(setup.start.y == doctest::Approx(2.0));
    CHECK(setup.goal.x == doctest::Approx(9.0));
    CHECK(setup.goal.y == doctest::Approx(2.0));
}

TEST_CASE("sample_episode: separation holds across a statistical sweep") {
    const auto world = empty_world(20.0, 20.0);
    Rng rng(41);
    for (int i = 0; i < 10000; ++i) {
        const auto setup = sample_episode(world, rng, 0.4);
        const double sep = std::hypot(setup.goal.x - setup.start.x, setup.goal.y - setup.start.y);
        CHECK(sep >= world.min_separation);
    }
}

TEST_CASE("sample_episode: starts inside obstacles are rejected") {
    WorldSpec world = empty_world(20.0, 20.0);
    // Start region fully covered by an obstacle except a thin edge strip.
    world.obstacles.push_back(make_box(4.0, 4.0, 4.0, 4.0));
    world.start_regions = {{4.0, 4.0, 4.0, 6.0}};  // top strip y in (8,10] is free
    world.goal_regions = {{15.0, 15.0, 2.0, 2.0}};
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const auto setup = sample_episode(world, rng, 0.4);
        CHECK(world.obstacle_distance({setup.start.x, setup.start.y}) >= 0.4);
    }
}

TEST_CASE("sample_episode: impossible constraints raise a config error") {
    WorldSpec world = empty_world(20.0, 20.0);
    world.start_regions = {{2.0, 2.0, 0.0, 0.0}};
    world.goal_regions = {{3.0, 2.0, 0.0, 0.0}};  // 1 m apart, min_separation 6
    Rng rng(47);
    CHECK_THROWS_AS(sample_episode(world, rng, 0.4), std::invalid_argument);
}

TEST_CASE("worldspec: serialize/parse round trip") {
    auto world = random_world(7);
    world.name = "roundtrip";
    const auto text = serialize_world(world);
    const auto back = parse_world(text);
    CHECK(back.name == world.name);
    CHECK(back.width == world.width);
    CHECK(back.obstacles.size() == world.obstacles.size());
    CHECK(back.min_separation == world.min_separation);
    CHECK(serialize_world(back) == text);
}

TEST_CASE("worldspec: parser rejects malformed input") {
    CHECK_THROWS_AS(parse_world("not a world\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_world("worldspec v1\nbounds 10\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_world("worldspec v1\nbounds 10 10\nfrob 1 2\n"), std::invalid_argument);
    // poly with 2 vertices
    CHECK_THROWS_AS(parse_world("worldspec v1\nbounds 10 10\npoly 1 1 2 2\n"),
                    std::invalid_argument);
    // no regions
    CHECK_THROWS_AS(parse_world("worldspec v1\nbounds 10 10\n"), std::invalid_argument);
}

TEST_CASE("reward: Table I branch values and precedence") {
    RewardConfig cfg;
    // goal branch
    auto r = compute_reward(1.0, 0.4, 5.0, cfg);
    CHECK(r.value == 30.0);
    CHECK(r.cause == TerminalCause::goal);
    // collision branch
    r = compute_reward(1.0, 2.0, 0.3, cfg);
    CHECK(r.value == -20.0);
    CHECK(r.cause == TerminalCause::collision);
    // shaping branch rewards approach
    r = compute_reward(5.00, 4.98, 5.0, cfg);
    CHECK(r.value == doctest::Approx(0.3));
    CHECK(r.cause == TerminalCause::none);
    // both thresholds crossed: goal wins
    r = compute_reward(1.0, 0.4, 0.1, cfg);
    CHECK(r.value == 30.0);
    CHECK(r.cause == TerminalCause::goal);
}

TEST_CASE("reward: literal sign flag reproduces the printed form") {
    RewardConfig cfg;
    cfg.literal_sign = true;
    const auto r = compute_reward(5.00, 4.98, 5.0, cfg);
    CHECK(r.value == doctest::Approx(-0.3));
}

TEST_CASE("reward: config validation") {
    RewardConfig bad;
    bad.goal_reward = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = RewardConfig{};
    bad.obstacle_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("SimEnv: timeout fires at exactly the step limit") {
    WorldSpec world = empty_world(20.0, 20.0);
    world.goal_regions = {{18.0, 18.0, 1.0, 1.0}};
    world.start_regions = {{1.0, 1.0, 1.0, 1.0}};
    SimEnv env(world, KinematicsConfig{}, RewardConfig{}, {}, 1000);
    EpisodeSetup setup;
    setup.start = {2.0, 10.0, 0.0};
    setup.goal = {18.5, 18.5};
    env.reset(setup);

    // Spin in place at min speed: never reaches the goal, never collides.
    long steps = 0;
    TerminalCause cause = TerminalCause::none;
    while (cause == TerminalCause::none) {
        const auto res = env.step(0.05, -0.05);
        cause = res.cause;
        ++steps;
        REQUIRE(steps <= 1000);
    }
    CHECK(steps == 1000);
    CHECK(cause == TerminalCause::timeout);
}

TEST_CASE("SimEnv: reaching the goal terminates with the goal cause") {
    WorldSpec world = empty_world(20.0, 20.0);
    SimEnv env(world, KinematicsConfig{}, RewardConfig{}, {}, 1000);
    EpisodeSetup setup;
    setup.start = {4.0, 10.0, 0.0};
    setup.goal = {12.0, 10.0};
    env.reset(setup);

    TerminalCause cause = TerminalCause::none;
    double total = 0.0;
    long steps = 0;
    while (cause == TerminalCause::none && steps < 1000) {
        const auto res = env.step(0.5, 0.5);  // drive straight at the goal
        total += res.reward;
        cause = res.cause;
        ++steps;
    }
    CHECK(cause == TerminalCause::goal);
    CHECK(total > 0.0);
}
