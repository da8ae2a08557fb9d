#include "sddpg/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sddpg {

void Obstacle::append_segments(std::vector<Segment>& out) const {
    if (kind == Kind::wall) {
        out.push_back({points[0], points[1]});
        return;
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        out.push_back({points[i], points[(i + 1) % points.size()]});
}

bool Obstacle::contains(const Point& p) const {
    if (kind == Kind::wall) return false;
    // Even-odd rule.
    bool inside = false;
    for (std::size_t i = 0, j = points.size() - 1; i < points.size(); j = i++) {
        const Point& a = points[i];
        const Point& b = points[j];
        if ((a.y > p.y) != (b.y > p.y) &&
            p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            inside = !inside;
    }
    return inside;
}

Obstacle make_box(double x, double y, double w, double h) {
    Obstacle o;
    o.kind = Obstacle::Kind::polygon;
    o.points = {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
    return o;
}

Obstacle make_polygon(std::vector<Point> pts) {
    if (pts.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    Obstacle o;
    o.kind = Obstacle::Kind::polygon;
    o.points = std::move(pts);
    return o;
}

Obstacle make_wall(Point a, Point b) {
    Obstacle o;
    o.kind = Obstacle::Kind::wall;
    o.points = {a, b};
    return o;
}

void WorldSpec::validate() const {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("WorldSpec: bad bounds");
    if (start_regions.empty() || goal_regions.empty())
        throw std::invalid_argument("WorldSpec: start and goal regions must be non-empty");
    if (min_separation < 0.0) throw std::invalid_argument("WorldSpec: negative separation");
    for (const auto& ob : obstacles)
        for (const auto& p : ob.points)
            if (p.x < -1e-9 || p.y < -1e-9 || p.x > width + 1e-9 || p.y > height + 1e-9)
                throw std::invalid_argument("WorldSpec: obstacle outside bounds");
}

double WorldSpec::diagonal() const { return std::hypot(width, height); }

std::vector<Segment> WorldSpec::collision_segments() const {
    std::vector<Segment> segs;
    segs.push_back({{0, 0}, {width, 0}});
    segs.push_back({{width, 0}, {width, height}});
    segs.push_back({{width, height}, {0, height}});
    segs.push_back({{0, height}, {0, 0}});
    for (const auto& ob : obstacles) ob.append_segments(segs);
    return segs;
}

double WorldSpec::obstacle_distance(const Point& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : collision_segments()) best = std::min(best, point_segment_distance(p, s));
    for (const auto& ob : obstacles)
        if (ob.contains(p)) return 0.0;
    return best;
}

bool WorldSpec::inside_bounds(const Point& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
}

double point_segment_distance(const Point& p, const Segment& s) {
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = s.a.x + t * dx;
    const double cy = s.a.y + t * dy;
    return std::hypot(p.x - cx, p.y - cy);
}

double ray_segment_intersection(const Point& origin, double dir_x, double dir_y,
                                const Segment& s) {
    // Solve origin + t*dir = a + u*(b-a), t >= 0, u in [0,1].
    const double ex = s.b.x - s.a.x;
    const double ey = s.b.y - s.a.y;
    const double denom = dir_x * ey - dir_y * ex;
    if (std::abs(denom) < 1e-15) return -1.0;
    const double ox = s.a.x - origin.x;
    const double oy = s.a.y - origin.y;
    const double t = (ox * ey - oy * ex) / denom;
    const double u = (ox * dir_y - oy * dir_x) / denom;
    if (t < 0.0 || u < -1e-12 || u > 1.0 + 1e-12) return -1.0;
    return t;
}

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string serialize_world(const WorldSpec& w) {
    std::ostringstream os;
    os << "worldspec v1\n";
    os << "name " << w.name << "\n";
    os << "bounds " << format_double(w.width) << " " << format_double(w.height) << "\n";
    os << "minsep " << format_double(w.min_separation) << "\n";
    for (const auto& ob : w.obstacles) {
        if (ob.kind == Obstacle::Kind::wall) {
            os << "wall " << format_double(ob.points[0].x) << " " << format_double(ob.points[0].y)
               << " " << format_double(ob.points[1].x) << " " << format_double(ob.points[1].y)
               << "\n";
        } else {
            os << "poly";
            for (const auto& p : ob.points)
                os << " " << format_double(p.x) << " " << format_double(p.y);
            os << "\n";
        }
    }
    for (const auto& r : w.start_regions)
        os << "start " << format_double(r.x) << " " << format_double(r.y) << " "
           << format_double(r.w) << " " << format_double(r.h) << "\n";
    for (const auto& r : w.goal_regions)
        os << "goal " << format_double(r.x) << " " << format_double(r.y) << " "
           << format_double(r.w) << " " << format_double(r.h) << "\n";
    return os.str();
}

WorldSpec parse_world(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "worldspec v1")
        throw std::invalid_argument("worldspec: unsupported header '" + header + "'");

    WorldSpec w;
    w.start_regions.clear();
    w.goal_regions.clear();
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("worldspec line " + std::to_string(lineno) + ": " + why);
        };
        if (tag == "name") {
            ls >> w.name;
        } else if (tag == "bounds") {
            if (!(ls >> w.width >> w.height)) fail("bounds needs two numbers");
        } else if (tag == "minsep") {
            if (!(ls >> w.min_separation)) fail("minsep needs a number");
        } else if (tag == "box") {
            double x, y, bw, bh;
            if (!(ls >> x >> y >> bw >> bh)) fail("box needs x y w h");
            w.obstacles.push_back(make_box(x, y, bw, bh));
        } else if (tag == "poly") {
            std::vector<Point> pts;
            double x, y;
            while (ls >> x >> y) pts.push_back({x, y});
            if (pts.size() < 3) fail("poly needs at least 3 vertices");
            w.obstacles.push_back(make_polygon(std::move(pts)));
        } else if (tag == "wall") {
            double x1, y1, x2, y2;
            if (!(ls >> x1 >> y1 >> x2 >> y2)) fail("wall needs x1 y1 x2 y2");
            w.obstacles.push_back(make_wall({x1, y1}, {x2, y2}));
        } else if (tag == "start") {
            Rect r;
            if (!(ls >> r.x >> r.y >> r.w >> r.h)) fail("start needs x y w h");
            w.start_regions.push_back(r);
        } else if (tag == "goal") {
            Rect r;
            if (!(ls >> r.x >> r.y >> r.w >> r.h)) fail("goal needs x y w h");
            w.goal_regions.push_back(r);
        } else {
            fail("unknown tag '" + tag + "'");
        }
    }
    w.validate();
    return w;
}

WorldSpec load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open world file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_world(ss.str());
}

void save_world(const WorldSpec& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write world file: " + path);
    out << serialize_world(w);
}

}  // namespace sddpg
