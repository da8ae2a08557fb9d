#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sddpg/ddpg.hpp"
#include "sddpg/eval.hpp"

namespace sddpg {

// Flat key = value file with # comments.
struct KeyValues {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
};

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);

// Everything one run needs: training knobs, curriculum world files and
// budgets, the evaluation protocol, and the seed list.
struct RunConfig {
    std::string preset = "desk";
    TrainConfig train;
    std::vector<std::string> stage_worlds;
    std::vector<long> stage_budgets;
    std::string eval_world;
    EvalConfig eval;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    int quant_weight_max = 127;
};

// Scaled two-stage protocol for laptop-length runs.
RunConfig desk_preset();
// The full-scale protocol with the published hyperparameters.
RunConfig paper_preset();
RunConfig make_preset(const std::string& name);

// Apply key = value overrides on top of a preset; unknown keys are an error.
void apply_overrides(RunConfig& cfg, const KeyValues& kv);

// Render the complete effective configuration, readable and re-loadable.
std::string show_config(const RunConfig& cfg);

// Load the curriculum worlds from a directory.
CurriculumSchedule load_schedule(const RunConfig& cfg, const std::string& worlds_dir);
WorldSpec load_eval_world(const RunConfig& cfg, const std::string& worlds_dir);

}  // namespace sddpg
