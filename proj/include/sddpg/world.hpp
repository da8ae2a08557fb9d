#pragma once

#include <string>
#include <vector>

#include "sddpg/numeric.hpp"
#include "sddpg/rng.hpp"

namespace sddpg {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Point a, b;
};

// Axis-aligned rectangle used for start/goal sampling regions.
struct Rect {
    double x = 0.0, y = 0.0, w = 0.0, h = 0.0;

    double area() const { return w * h; }
    Point sample(Rng& rng) const { return {x + rng.uniform() * w, y + rng.uniform() * h}; }
};

// Obstacles are closed polygons (boxes included) or open wall polylines.
struct Obstacle {
    enum class Kind { polygon, wall };
    Kind kind = Kind::polygon;
    std::vector<Point> points;

    void append_segments(std::vector<Segment>& out) const;
    bool contains(const Point& p) const;  // polygons only; walls have no interior
};

Obstacle make_box(double x, double y, double w, double h);
Obstacle make_polygon(std::vector<Point> pts);
Obstacle make_wall(Point a, Point b);

// Declarative environment: bounds with origin at (0,0), obstacle primitives,
// and sampling regions for episode starts and goals.
struct WorldSpec {
    std::string name = "world";
    double width = 10.0;
    double height = 10.0;
    std::vector<Obstacle> obstacles;
    std::vector<Rect> start_regions;
    std::vector<Rect> goal_regions;
    double min_separation = 4.0;

    void validate() const;
    double diagonal() const;
    // All obstacle segments plus the four boundary walls.
    std::vector<Segment> collision_segments() const;
    // Minimum distance from p to any obstacle surface (0 inside an obstacle).
    double obstacle_distance(const Point& p) const;
    bool inside_bounds(const Point& p) const;
};

// Plain-text format, one primitive per line, versioned header.
WorldSpec parse_world(const std::string& text);
std::string serialize_world(const WorldSpec& w);
WorldSpec load_world(const std::string& path);
void save_world(const WorldSpec& w, const std::string& path);

// Geometry helpers shared by raycast and collision checks.
double point_segment_distance(const Point& p, const Segment& s);
// Ray-segment intersection: smallest positive t with p + t*dir on s, or a
// negative value when there is no hit.
double ray_segment_intersection(const Point& origin, double dir_x, double dir_y,
                                const Segment& s);

}  // namespace sddpg
