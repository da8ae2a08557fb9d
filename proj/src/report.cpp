#include "sddpg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace sddpg {

std::vector<MethodSummary> bench_compare(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("bench_compare: no reports");
    for (const auto& r : reports) {
        if (r.pairs_hash != reports.front().pairs_hash)
            throw ProtocolViolation("bench_compare: start/goal sets differ between reports (" +
                                    r.method + " vs " + reports.front().method + ")");
        if (r.episodes.size() != reports.front().episodes.size())
            throw ProtocolViolation("bench_compare: episode counts differ");
    }

    // Episodes solved by every method: the common start/goal filter.
    std::set<int> common;
    for (const auto& e : reports.front().episodes)
        if (e.outcome == TerminalCause::goal) common.insert(e.index);
    for (const auto& r : reports) {
        std::set<int> mine;
        for (const auto& e : r.episodes)
            if (e.outcome == TerminalCause::goal) mine.insert(e.index);
        std::set<int> keep;
        std::ranges::set_intersection(common, mine, std::inserter(keep, keep.begin()));
        common = std::move(keep);
    }

    std::vector<MethodSummary> table;
    for (const auto& r : reports) {
        MethodSummary s;
        s.method = r.method;
        s.success_rate = r.success_rate();
        s.collision_rate = r.collision_rate();
        s.timeout_rate = r.timeout_rate();
        s.common_successes = static_cast<int>(common.size());
        double dist = 0.0, speed = 0.0;
        for (const auto& e : r.episodes) {
            if (!common.count(e.index)) continue;
            dist += e.route_length;
            speed += e.mean_speed;
        }
        if (!common.empty()) {
            s.avg_distance = dist / common.size();
            s.avg_speed = speed / common.size();
        }
        table.push_back(s);
    }
    return table;
}

std::string bench_table_csv(const std::vector<MethodSummary>& table) {
    std::ostringstream os;
    os << "# bench-table v1\n";
    os << "method,success_rate,collision_rate,timeout_rate,avg_distance,avg_speed,"
          "common_successes\n";
    char buf[256];
    for (const auto& s : table) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n", s.method.c_str(),
                      s.success_rate, s.collision_rate, s.timeout_rate, s.avg_distance,
                      s.avg_speed, s.common_successes);
        os << buf;
    }
    return os.str();
}

namespace {

const char* kSeriesColors[] = {"#4878cf", "#6acc65", "#d65f5f", "#b47cc7", "#c4ad66", "#77bedb"};

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& methods,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& series_names, double y_max) {
    const int width = 640, height = 400;
    const int margin_left = 60, margin_bottom = 60, margin_top = 50, margin_right = 20;
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;
    const int groups = static_cast<int>(methods.size());
    const int bars = static_cast<int>(series.size());
    if (y_max <= 0.0) {
        for (const auto& s : series)
            for (double v : s) y_max = std::max(y_max, v);
        y_max = y_max <= 0.0 ? 1.0 : y_max * 1.15;
    }

    std::ostringstream os;
    char buf[512];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">%s</text>\n",
                  margin_left, svg_escape(title).c_str());
    os << buf;

    // y axis with 5 gridlines
    for (int g = 0; g <= 5; ++g) {
        const double v = y_max * g / 5.0;
        const double y = margin_top + plot_h * (1.0 - static_cast<double>(g) / 5.0);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"#ddd\"/>\n"
                      "<text x=\"%d\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"end\">%.2f</text>\n",
                      margin_left, y, width - margin_right, y, margin_left - 6, y + 4, v);
        os << buf;
    }

    const double group_w = plot_w / std::max(groups, 1);
    const double bar_w = group_w / (bars + 1);
    for (int gi = 0; gi < groups; ++gi) {
        for (int si = 0; si < bars; ++si) {
            const double v = series[si][gi];
            const double h = plot_h * std::clamp(v / y_max, 0.0, 1.0);
            const double x = margin_left + gi * group_w + (si + 0.5) * bar_w;
            const double y = margin_top + plot_h - h;
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                          "fill=\"%s\"/>\n",
                          x, y, bar_w * 0.9, h, kSeriesColors[si % 6]);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      margin_left + (gi + 0.5) * group_w, height - margin_bottom + 18,
                      svg_escape(methods[gi]).c_str());
        os << buf;
    }
    // legend
    for (int si = 0; si < bars; ++si) {
        const double x = margin_left + si * 140.0;
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.1f\" y=\"%d\" width=\"12\" height=\"12\" fill=\"%s\"/>\n"
                      "<text x=\"%.1f\" y=\"%d\" font-family=\"sans-serif\" "
                      "font-size=\"12\">%s</text>\n",
                      x, height - 24, kSeriesColors[si % 6], x + 16.0, height - 14,
                      svg_escape(series_names[si]).c_str());
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

std::string outcome_chart_svg(const std::vector<MethodSummary>& table) {
    std::vector<std::string> methods;
    std::vector<double> success, collision, timeout;
    for (const auto& s : table) {
        methods.push_back(s.method);
        success.push_back(s.success_rate);
        collision.push_back(s.collision_rate);
        timeout.push_back(s.timeout_rate);
    }
    return bar_chart_svg("Episode outcome rates", methods, {success, collision, timeout},
                         {"success", "collision", "timeout"}, 1.0);
}

std::string metric_chart_svg(const std::vector<MethodSummary>& table, const std::string& metric) {
    std::vector<std::string> methods;
    std::vector<double> values;
    for (const auto& s : table) {
        methods.push_back(s.method);
        values.push_back(metric == "distance" ? s.avg_distance : s.avg_speed);
    }
    const std::string title = metric == "distance" ? "Average route distance (m)"
                                                   : "Average speed (m/s)";
    return bar_chart_svg(title, methods, {values}, {metric}, 0.0);
}

std::string heatmap_svg(const Heatmap& map, const std::string& title) {
    const int cell_px = 28;
    const int margin = 40;
    const int width = margin * 2 + map.cols * cell_px;
    const int height = margin * 2 + map.rows * cell_px + 20;

    std::ostringstream os;
    char buf[512];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">%s</text>\n",
                  margin, svg_escape(title).c_str());
    os << buf;
    for (int cy = 0; cy < map.rows; ++cy) {
        for (int cx = 0; cx < map.cols; ++cx) {
            const double v = map.value(cx, cy);
            std::string fill = "#eeeeee";  // never crossed
            if (v >= 0.0) {
                // red (0) to green (1)
                const int r = static_cast<int>(std::lround(220 * (1.0 - v) + 30 * v));
                const int g = static_cast<int>(std::lround(60 * (1.0 - v) + 180 * v));
                char color[16];
                std::snprintf(color, sizeof(color), "#%02x%02x40", r, g);
                fill = color;
            }
            // SVG y grows downward; world rows grow upward
            const int x = margin + cx * cell_px;
            const int y = margin + (map.rows - 1 - cy) * cell_px + 20;
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\" "
                          "stroke=\"#ccc\"/>\n",
                          x, y, cell_px, cell_px, fill.c_str());
            os << buf;
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sddpg
