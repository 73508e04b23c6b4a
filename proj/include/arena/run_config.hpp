#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/config.hpp"
#include "arena/episode.hpp"
#include "arena/reward.hpp"
#include "arena/tournament.hpp"

namespace arena {

/// Directory holding the bundled task corpora, fixed at build time.
std::filesystem::path bundled_data_dir();

/// Top-level CLI configuration. JSON layout:
///   {"env": {...}, "rewards": {...}, "tasks": {"train": PATH, "eval": PATH},
///    "tournament": {"pve": {...}, "pvp": {...}, "roster": [...], "baseline": NAME},
///    "output_dir": DIR, "master_seed": U64}
/// Every section and key is optional; unknown keys are rejected.
struct RunConfig {
  EnvConfig env;
  RewardConfig rewards;
  std::filesystem::path train_tasks = bundled_data_dir() / "tasks" / "train.tasks";
  std::filesystem::path eval_tasks = bundled_data_dir() / "tasks" / "eval.tasks";

  std::int32_t pve_episodes = 32;
  std::vector<std::uint64_t> pve_map_seeds{1, 2, 3, 4};
  TrialMode trial_mode = TrialMode::RoundRobin;

  std::int32_t pvp_num_groups = 9;
  std::int32_t pvp_group_size = 14;
  std::int32_t pvp_filler_agents = 2;
  std::int32_t pvp_maps = 256;
  std::int32_t pvp_episodes = 200;
  std::int32_t pvp_rounds = 9;

  std::vector<std::string> roster{"forage", "warrior", "marketeer", "random"};
  std::string baseline = "random";

  std::filesystem::path output_dir = "out";
  std::uint64_t master_seed = 0;
};

/// Relative task paths resolve against `base_dir`. Throws ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

PveConfig make_pve_config(const RunConfig& c, std::vector<TaskSpec> tasks);
PvpConfig make_pvp_config(const RunConfig& c, std::vector<TaskSpec> tasks);

/// The single episode `arena simulate` runs: map seed and episode seed both
/// derive from `seed`, tasks are dealt round-robin over `tasks`, every agent
/// uses `policy`, and the episode is cut at `ticks`.
EpisodeSpec simulate_spec(const EnvConfig& env, const std::vector<TaskSpec>& tasks, std::uint64_t seed, Tick ticks,
                          const std::string& policy);

}  // namespace arena
