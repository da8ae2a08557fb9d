#include "sddpg/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sddpg {

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stod(it->second);
}

long KeyValues::get_long(const std::string& key, long fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stol(it->second);
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stoi(it->second);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + it->second);
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            // blank or comment-only lines are fine
            bool blank = true;
            for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
            if (blank) continue;
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto from = s.find_first_not_of(" \t\r");
            const auto to = s.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string{} : s.substr(from, to - from + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        kv.values[key] = value;
    }
    return kv;
}

KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

RunConfig paper_preset() {
    RunConfig cfg;
    cfg.preset = "paper";

    cfg.train.actor_kind = ActorKind::san;
    cfg.train.lif = LifConfig{0.5, 0.5, 0.75, 5};
    cfg.train.pseudo = PseudoGradConfig{1.0, 0.5};
    cfg.train.san_hidden = {256, 256};
    cfg.train.critic_hidden = {512, 512};
    cfg.train.critic_action_layer = 1;
    cfg.train.batch_size = 256;
    cfg.train.actor_lr = 1e-5;
    cfg.train.critic_lr = 1e-4;
    cfg.train.gamma = 0.99;
    cfg.train.tau = 0.01;
    cfg.train.replay_capacity = 100000;
    cfg.train.warmup_steps = 1000;
    cfg.train.update_every = 1;
    cfg.train.max_episode_steps = 1000;
    cfg.train.noise = NoiseConfig{0.5, 0.05, 150000};
    cfg.train.placement_clearance = 0.5;

    cfg.stage_worlds = {"paper_stage1.world", "paper_stage2.world", "paper_stage3.world",
                        "paper_stage4.world"};
    cfg.stage_budgets = {50000, 50000, 50000, 50000};
    cfg.eval_world = "paper_test.world";
    cfg.eval.episodes = 200;
    cfg.eval.min_separation = 6.0;
    cfg.eval.max_steps = 1000;
    cfg.seeds = {1, 2, 3, 4, 5};
    return cfg;
}

RunConfig desk_preset() {
    RunConfig cfg = paper_preset();
    cfg.preset = "desk";

    cfg.train.san_hidden = {128, 128};
    cfg.train.critic_hidden = {256, 256};
    cfg.train.batch_size = 128;
    cfg.train.actor_lr = 1e-4;
    cfg.train.critic_lr = 1e-3;
    cfg.train.replay_capacity = 50000;
    cfg.train.warmup_steps = 2000;
    cfg.train.update_every = 2;
    cfg.train.actor_delay_updates = 1500;
    cfg.train.max_episode_steps = 500;
    cfg.train.noise = NoiseConfig{0.5, 0.05, 24000};

    // Desk-scale sensor: 5 m range cap keeps nearby obstacles visible in the
    // [0,1] channel encoding at T=5 (a 40 m cap squashes sub-meter readings
    // to spike probabilities below 0.01).
    cfg.train.kinematics.lidar.max_range = 5.0;

    cfg.stage_worlds = {"desk_stage1.world", "desk_stage2.world"};
    cfg.stage_budgets = {8000, 22000};
    cfg.eval_world = "desk_test.world";
    cfg.eval.episodes = 50;
    cfg.eval.min_separation = 4.0;
    cfg.eval.max_steps = 1000;
    cfg.seeds = {1, 2, 3};
    return cfg;
}

RunConfig make_preset(const std::string& name) {
    if (name == "desk") return desk_preset();
    if (name == "paper") return paper_preset();
    throw std::invalid_argument("unknown preset: " + name + " (expected desk or paper)");
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

void apply_overrides(RunConfig& cfg, const KeyValues& kv) {
    static const std::vector<std::string> known = {
        "actor_kind", "v_th", "current_decay", "voltage_decay", "timesteps", "pseudo_amplifier",
        "pseudo_window", "current_adjoint", "san_hidden", "critic_hidden", "critic_action_layer",
        "batch_size", "actor_lr", "critic_lr", "gamma", "tau", "optimizer", "replay_capacity",
        "warmup_steps", "random_warmup_actions", "warmup_action_hold", "update_every", "actor_delay_updates", "max_episode_steps", "noise_sigma_start",
        "noise_sigma_end", "noise_decay_steps", "placement_clearance", "timeout_bootstraps",
        "parallel", "goal_reward", "obstacle_reward", "amplification", "goal_threshold",
        "obstacle_threshold", "reward_literal_sign", "v_min", "v_max", "wheel_separation",
        "robot_radius", "dt", "lidar_beams", "lidar_min_range", "lidar_max_range",
        "goal_distance_cap", "stage_worlds", "stage_budgets", "eval_world", "eval_episodes",
        "eval_min_separation", "eval_max_steps", "eval_seed", "seeds", "quant_weight_max"};
    for (const auto& [key, value] : kv.values) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
        (void)value;
    }

    TrainConfig& t = cfg.train;
    if (kv.has("actor_kind")) t.actor_kind = actor_kind_from_string(kv.get("actor_kind", ""));
    t.lif.v_th = kv.get_double("v_th", t.lif.v_th);
    t.lif.current_decay = kv.get_double("current_decay", t.lif.current_decay);
    t.lif.voltage_decay = kv.get_double("voltage_decay", t.lif.voltage_decay);
    t.lif.timesteps = kv.get_int("timesteps", t.lif.timesteps);
    t.pseudo.amplifier = kv.get_double("pseudo_amplifier", t.pseudo.amplifier);
    t.pseudo.window = kv.get_double("pseudo_window", t.pseudo.window);
    if (kv.has("current_adjoint")) {
        const std::string rule = kv.get("current_adjoint", "same_step");
        if (rule == "same_step") t.current_rule = CurrentAdjoint::same_step;
        else if (rule == "paper_literal") t.current_rule = CurrentAdjoint::paper_literal;
        else throw std::invalid_argument("config: bad current_adjoint: " + rule);
    }
    if (kv.has("san_hidden")) {
        t.san_hidden.clear();
        for (const auto& s : split_list(kv.get("san_hidden", ""))) t.san_hidden.push_back(std::stoi(s));
    }
    if (kv.has("critic_hidden")) {
        t.critic_hidden.clear();
        for (const auto& s : split_list(kv.get("critic_hidden", "")))
            t.critic_hidden.push_back(std::stoi(s));
    }
    t.critic_action_layer = kv.get_int("critic_action_layer", t.critic_action_layer);
    t.batch_size = kv.get_int("batch_size", t.batch_size);
    t.actor_lr = kv.get_double("actor_lr", t.actor_lr);
    t.critic_lr = kv.get_double("critic_lr", t.critic_lr);
    t.gamma = kv.get_double("gamma", t.gamma);
    t.tau = kv.get_double("tau", t.tau);
    if (kv.has("optimizer")) {
        const std::string o = kv.get("optimizer", "adam");
        if (o == "adam") t.optimizer = OptimizerKind::adam;
        else if (o == "sgd") t.optimizer = OptimizerKind::sgd;
        else throw std::invalid_argument("config: bad optimizer: " + o);
    }
    t.replay_capacity = kv.get_long("replay_capacity", t.replay_capacity);
    t.warmup_steps = kv.get_long("warmup_steps", t.warmup_steps);
    t.random_warmup_actions = kv.get_bool("random_warmup_actions", t.random_warmup_actions);
    t.warmup_action_hold = kv.get_int("warmup_action_hold", t.warmup_action_hold);
    t.update_every = kv.get_int("update_every", t.update_every);
    t.actor_delay_updates = kv.get_long("actor_delay_updates", t.actor_delay_updates);
    t.max_episode_steps = kv.get_long("max_episode_steps", t.max_episode_steps);
    t.noise.sigma_start = kv.get_double("noise_sigma_start", t.noise.sigma_start);
    t.noise.sigma_end = kv.get_double("noise_sigma_end", t.noise.sigma_end);
    t.noise.decay_steps = kv.get_long("noise_decay_steps", t.noise.decay_steps);
    t.placement_clearance = kv.get_double("placement_clearance", t.placement_clearance);
    t.timeout_bootstraps = kv.get_bool("timeout_bootstraps", t.timeout_bootstraps);
    t.parallel = kv.get_bool("parallel", t.parallel);

    t.reward.goal_reward = kv.get_double("goal_reward", t.reward.goal_reward);
    t.reward.obstacle_reward = kv.get_double("obstacle_reward", t.reward.obstacle_reward);
    t.reward.amplification = kv.get_double("amplification", t.reward.amplification);
    t.reward.goal_threshold = kv.get_double("goal_threshold", t.reward.goal_threshold);
    t.reward.obstacle_threshold = kv.get_double("obstacle_threshold", t.reward.obstacle_threshold);
    t.reward.literal_sign = kv.get_bool("reward_literal_sign", t.reward.literal_sign);

    t.kinematics.v_min = kv.get_double("v_min", t.kinematics.v_min);
    t.kinematics.v_max = kv.get_double("v_max", t.kinematics.v_max);
    t.kinematics.wheel_separation = kv.get_double("wheel_separation", t.kinematics.wheel_separation);
    t.kinematics.robot_radius = kv.get_double("robot_radius", t.kinematics.robot_radius);
    t.kinematics.dt = kv.get_double("dt", t.kinematics.dt);
    t.kinematics.lidar.beams = kv.get_int("lidar_beams", t.kinematics.lidar.beams);
    t.kinematics.lidar.min_range = kv.get_double("lidar_min_range", t.kinematics.lidar.min_range);
    t.kinematics.lidar.max_range = kv.get_double("lidar_max_range", t.kinematics.lidar.max_range);
    t.observation.goal_distance_cap =
        kv.get_double("goal_distance_cap", t.observation.goal_distance_cap);

    if (kv.has("stage_worlds")) cfg.stage_worlds = split_list(kv.get("stage_worlds", ""));
    if (kv.has("stage_budgets")) {
        cfg.stage_budgets.clear();
        for (const auto& s : split_list(kv.get("stage_budgets", "")))
            cfg.stage_budgets.push_back(std::stol(s));
    }
    if (cfg.stage_worlds.size() != cfg.stage_budgets.size())
        throw std::invalid_argument("config: stage_worlds and stage_budgets must align");
    cfg.eval_world = kv.get("eval_world", cfg.eval_world);
    cfg.eval.episodes = kv.get_int("eval_episodes", cfg.eval.episodes);
    cfg.eval.min_separation = kv.get_double("eval_min_separation", cfg.eval.min_separation);
    cfg.eval.max_steps = kv.get_long("eval_max_steps", cfg.eval.max_steps);
    cfg.eval.seed = static_cast<std::uint64_t>(kv.get_long("eval_seed", cfg.eval.seed));
    if (kv.has("seeds")) {
        cfg.seeds.clear();
        for (const auto& s : split_list(kv.get("seeds", "")))
            cfg.seeds.push_back(std::stoull(s));
    }
    cfg.quant_weight_max = kv.get_int("quant_weight_max", cfg.quant_weight_max);
}

std::string show_config(const RunConfig& cfg) {
    std::ostringstream os;
    char buf[256];
    auto put = [&](const char* key, const std::string& v) { os << key << " = " << v << "\n"; };
    auto putd = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        put(key, buf);
    };
    auto putl = [&](const char* key, long v) { put(key, std::to_string(v)); };

    os << "# effective configuration (preset: " << cfg.preset << ")\n";
    const TrainConfig& t = cfg.train;
    put("actor_kind", to_string(t.actor_kind));
    putd("v_th", t.lif.v_th);
    putd("current_decay", t.lif.current_decay);
    putd("voltage_decay", t.lif.voltage_decay);
    putl("timesteps", t.lif.timesteps);
    putd("pseudo_amplifier", t.pseudo.amplifier);
    putd("pseudo_window", t.pseudo.window);
    put("current_adjoint",
        t.current_rule == CurrentAdjoint::same_step ? "same_step" : "paper_literal");
    {
        std::string s;
        for (int h : t.san_hidden) s += (s.empty() ? "" : ",") + std::to_string(h);
        put("san_hidden", s);
        s.clear();
        for (int h : t.critic_hidden) s += (s.empty() ? "" : ",") + std::to_string(h);
        put("critic_hidden", s);
    }
    putl("critic_action_layer", t.critic_action_layer);
    putl("batch_size", t.batch_size);
    putd("actor_lr", t.actor_lr);
    putd("critic_lr", t.critic_lr);
    putd("gamma", t.gamma);
    putd("tau", t.tau);
    put("optimizer", t.optimizer == OptimizerKind::adam ? "adam" : "sgd");
    putl("replay_capacity", t.replay_capacity);
    putl("warmup_steps", t.warmup_steps);
    put("random_warmup_actions", t.random_warmup_actions ? "true" : "false");
    putl("warmup_action_hold", t.warmup_action_hold);
    putl("update_every", t.update_every);
    putl("actor_delay_updates", t.actor_delay_updates);
    putl("max_episode_steps", t.max_episode_steps);
    putd("noise_sigma_start", t.noise.sigma_start);
    putd("noise_sigma_end", t.noise.sigma_end);
    putl("noise_decay_steps", t.noise.decay_steps);
    putd("placement_clearance", t.placement_clearance);
    put("timeout_bootstraps", t.timeout_bootstraps ? "true" : "false");
    put("parallel", t.parallel ? "true" : "false");
    putd("goal_reward", t.reward.goal_reward);
    putd("obstacle_reward", t.reward.obstacle_reward);
    putd("amplification", t.reward.amplification);
    putd("goal_threshold", t.reward.goal_threshold);
    putd("obstacle_threshold", t.reward.obstacle_threshold);
    put("reward_literal_sign", t.reward.literal_sign ? "true" : "false");
    putd("v_min", t.kinematics.v_min);
    putd("v_max", t.kinematics.v_max);
    putd("wheel_separation", t.kinematics.wheel_separation);
    putd("robot_radius", t.kinematics.robot_radius);
    putd("dt", t.kinematics.dt);
    putl("lidar_beams", t.kinematics.lidar.beams);
    putd("lidar_min_range", t.kinematics.lidar.min_range);
    putd("lidar_max_range", t.kinematics.lidar.max_range);
    putd("goal_distance_cap", t.observation.goal_distance_cap);
    {
        std::string s;
        for (const auto& w : cfg.stage_worlds) s += (s.empty() ? "" : ",") + w;
        put("stage_worlds", s);
        s.clear();
        for (long b : cfg.stage_budgets) s += (s.empty() ? "" : ",") + std::to_string(b);
        put("stage_budgets", s);
    }
    put("eval_world", cfg.eval_world);
    putl("eval_episodes", cfg.eval.episodes);
    putd("eval_min_separation", cfg.eval.min_separation);
    putl("eval_max_steps", cfg.eval.max_steps);
    putl("eval_seed", static_cast<long>(cfg.eval.seed));
    {
        std::string s;
        for (auto v : cfg.seeds) s += (s.empty() ? "" : ",") + std::to_string(v);
        put("seeds", s);
    }
    putl("quant_weight_max", cfg.quant_weight_max);
    return os.str();
}

CurriculumSchedule load_schedule(const RunConfig& cfg, const std::string& worlds_dir) {
    CurriculumSchedule schedule;
    for (std::size_t i = 0; i < cfg.stage_worlds.size(); ++i) {
        StageSpec stage;
        stage.world = load_world(worlds_dir + "/" + cfg.stage_worlds[i]);
        stage.step_budget = cfg.stage_budgets[i];
        schedule.stages.push_back(std::move(stage));
    }
    return schedule;
}

WorldSpec load_eval_world(const RunConfig& cfg, const std::string& worlds_dir) {
    return load_world(worlds_dir + "/" + cfg.eval_world);
}

}  // namespace sddpg
