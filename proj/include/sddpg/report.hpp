#pragma once

#include <string>
#include <vector>

#include "sddpg/eval.hpp"

namespace sddpg {

struct MethodSummary {
    std::string method;
    double success_rate = 0.0;
    double collision_rate = 0.0;
    double timeout_rate = 0.0;
    double avg_distance = 0.0;  // over commonly successful episodes
    double avg_speed = 0.0;
    int common_successes = 0;
};

// Thrown when reports were generated on different start/goal sets.
struct ProtocolViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Route metrics are averaged over episodes that every method solved, so the
// comparison uses common start and goal positions.
std::vector<MethodSummary> bench_compare(const std::vector<EvalReport>& reports);

std::string bench_table_csv(const std::vector<MethodSummary>& table);

// Static SVG artifacts.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& methods,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& series_names, double y_max);
std::string outcome_chart_svg(const std::vector<MethodSummary>& table);
std::string metric_chart_svg(const std::vector<MethodSummary>& table, const std::string& metric);
std::string heatmap_svg(const Heatmap& map, const std::string& title);

}  // namespace sddpg
