#include "arena/run_config.hpp"

#include <algorithm>
#include <fstream>

#include "arena/json_io.hpp"
#include "arena/rng.hpp"

#ifndef ARENA_DATA_DIR
#define ARENA_DATA_DIR "data"
#endif

namespace arena {
namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

bool is_seed(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  expect_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
void read_int(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  out = j.at(key).get<T>();
}

std::filesystem::path resolve(const json& v, const std::filesystem::path& base, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + " must be a path string");
  std::filesystem::path p = v.get<std::string>();
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

std::filesystem::path bundled_data_dir() { return ARENA_DATA_DIR; }

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "config", {"env", "rewards", "tasks", "tournament", "output_dir", "master_seed"});
  RunConfig c;
  if (j.contains("env")) c.env = env_config_from_json(j.at("env"));
  if (j.contains("rewards")) c.rewards = reward_config_from_json(j.at("rewards"));
  if (j.contains("tasks")) {
    const json& t = j.at("tasks");
    check_keys(t, "tasks", {"train", "eval"});
    if (t.contains("train")) c.train_tasks = resolve(t.at("train"), base_dir, "tasks.train");
    if (t.contains("eval")) c.eval_tasks = resolve(t.at("eval"), base_dir, "tasks.eval");
  }
  if (j.contains("tournament")) {
    const json& t = j.at("tournament");
    check_keys(t, "tournament", {"pve", "pvp", "roster", "baseline"});
    if (t.contains("pve")) {
      const json& p = t.at("pve");
      check_keys(p, "tournament.pve", {"episodes", "map_seeds", "trial_mode"});
      read_int(p, "episodes", c.pve_episodes, "tournament.pve");
      if (p.contains("map_seeds")) {
        if (!p.at("map_seeds").is_array()) throw ConfigError("tournament.pve.map_seeds must be an array");
        c.pve_map_seeds.clear();
        for (const json& s : p.at("map_seeds")) {
          if (!is_seed(s)) throw ConfigError("tournament.pve.map_seeds must hold unsigned integers");
          c.pve_map_seeds.push_back(s.get<std::uint64_t>());
        }
      }
      if (p.contains("trial_mode")) {
        const json& m = p.at("trial_mode");
        if (m == "round_robin") c.trial_mode = TrialMode::RoundRobin;
        else if (m == "sampled") c.trial_mode = TrialMode::Sampled;
        else throw ConfigError("tournament.pve.trial_mode must be \"round_robin\" or \"sampled\"");
      }
    }
    if (t.contains("pvp")) {
      const json& p = t.at("pvp");
      check_keys(p, "tournament.pvp", {"num_groups", "group_size", "filler_agents", "maps", "episodes", "rounds"});
      read_int(p, "num_groups", c.pvp_num_groups, "tournament.pvp");
      read_int(p, "group_size", c.pvp_group_size, "tournament.pvp");
      read_int(p, "filler_agents", c.pvp_filler_agents, "tournament.pvp");
      read_int(p, "maps", c.pvp_maps, "tournament.pvp");
      read_int(p, "episodes", c.pvp_episodes, "tournament.pvp");
      read_int(p, "rounds", c.pvp_rounds, "tournament.pvp");
    }
    if (t.contains("roster")) {
      if (!t.at("roster").is_array()) throw ConfigError("tournament.roster must be an array");
      c.roster.clear();
      for (const json& n : t.at("roster")) {
        if (!n.is_string()) throw ConfigError("tournament.roster must hold policy names");
        c.roster.push_back(n.get<std::string>());
      }
    }
    if (t.contains("baseline")) {
      if (!t.at("baseline").is_string()) throw ConfigError("tournament.baseline must be a policy name");
      c.baseline = t.at("baseline").get<std::string>();
    }
  }
  if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir"), {}, "output_dir");
  if (j.contains("master_seed")) {
    if (!is_seed(j.at("master_seed"))) throw ConfigError("master_seed must be an unsigned integer");
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

json to_json(const RunConfig& c) {
  return {{"env", to_json(c.env)},
          {"rewards", to_json(c.rewards)},
          {"tasks", {{"train", c.train_tasks.string()}, {"eval", c.eval_tasks.string()}}},
          {"tournament",
           {{"pve",
             {{"episodes", c.pve_episodes},
              {"map_seeds", c.pve_map_seeds},
              {"trial_mode", c.trial_mode == TrialMode::RoundRobin ? "round_robin" : "sampled"}}},
            {"pvp",
             {{"num_groups", c.pvp_num_groups},
              {"group_size", c.pvp_group_size},
              {"filler_agents", c.pvp_filler_agents},
              {"maps", c.pvp_maps},
              {"episodes", c.pvp_episodes},
              {"rounds", c.pvp_rounds}}},
            {"roster", c.roster},
            {"baseline", c.baseline}}},
          {"output_dir", c.output_dir.string()},
          {"master_seed", c.master_seed}};
}

PveConfig make_pve_config(const RunConfig& c, std::vector<TaskSpec> tasks) {
  PveConfig p;
  p.episodes = c.pve_episodes;
  p.map_seeds = c.pve_map_seeds;
  p.env = c.env;
  p.tasks = std::move(tasks);
  p.trial_mode = c.trial_mode;
  p.master_seed = c.master_seed;
  return p;
}

PvpConfig make_pvp_config(const RunConfig& c, std::vector<TaskSpec> tasks) {
  PvpConfig p;
  p.num_groups = c.pvp_num_groups;
  p.group_size = c.pvp_group_size;
  p.filler_agents = c.pvp_filler_agents;
  p.maps = c.pvp_maps;
  p.episodes = c.pvp_episodes;
  p.rounds = c.pvp_rounds;
  p.env = c.env;
  p.tasks = std::move(tasks);
  p.master_seed = c.master_seed;
  return p;
}

EpisodeSpec simulate_spec(const EnvConfig& env, const std::vector<TaskSpec>& tasks, std::uint64_t seed, Tick ticks,
                          const std::string& policy) {
  if (ticks < 1) throw ConfigError("--ticks must be >= 1");
  if (tasks.empty()) throw ConfigError("simulate needs at least one task");
  EpisodeSpec s;
  s.env = env;
  s.env.max_ticks = ticks;
  s.env.seed = seed;
  s.map_seed = hash_combine(seed, 0x6d6170);
  s.seed = seed;
  s.policies = {policy};
  for (std::int32_t i = 0; i < env.num_agents; ++i) {
    s.tasks.push_back(tasks[static_cast<std::size_t>(i) % tasks.size()]);
  }
  return s;
}

}  // namespace arena
