#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arena/config.hpp"
#include "arena/reward.hpp"
#include "arena/rollout.hpp"
#include "arena/task.hpp"
#include "arena/world.hpp"

namespace arena {

/// Everything that determines one episode.
struct EpisodeSpec {
  EnvConfig env;
  std::uint64_t map_seed = 0;
  std::uint64_t seed = 0;
  /// One task per agent.
  std::vector<TaskSpec> tasks;
  /// Optional per-agent group ids.
  std::vector<std::int32_t> groups;
  /// Policy names; agent i is driven by policies[controller[i]]. An empty
  /// controller list means every agent uses policies[0].
  std::vector<std::string> policies;
  std::vector<std::int32_t> controller;
};

struct EpisodeOptions {
  /// Shaped rewards are computed when set.
  std::optional<RewardConfig> rewards;
  bool collect_rollout = false;
  /// Keep the per-tick trace (for the dense oracle).
  bool keep_trace = false;
  std::ostream* replay = nullptr;
};

struct AgentOutcome {
  double progress = 0.0;
  bool completed = false;
  Tick lifespan = 0;
  double total_reward = 0.0;
};

struct EpisodeResult {
  std::vector<AgentOutcome> agents;
  Tick ticks = 0;
  std::uint64_t final_hash = 0;
  std::int64_t agent_steps = 0;
  Diagnostics diagnostics;
  std::optional<FlatBatch> batch;
  EpisodeTrace trace;
};

/// Stream for agent `id` in an episode seeded with `seed`.
Rng agent_rng(std::uint64_t seed, AgentId id);

/// Throws ConfigError for an inconsistent spec.
EpisodeResult run_episode(const EpisodeSpec& spec, const EpisodeOptions& options = {});

}  // namespace arena
