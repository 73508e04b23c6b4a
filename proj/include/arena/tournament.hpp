#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/config.hpp"
#include "arena/task.hpp"

namespace arena {

enum class TrialMode : std::uint8_t {
  RoundRobin,  ///< exact floor(total/tasks) trials per task, remainder to the lowest task ids
  Sampled,     ///< uniform i.i.d. draws over the eval tasks
};

/// Trials per task when `slots` agent-episodes are dealt round-robin over
/// `num_tasks` tasks. Throws ConfigError when num_tasks < 1 or slots < num_tasks.
std::vector<std::int64_t> trials_per_task(std::int64_t slots, std::int64_t num_tasks);

struct PveConfig {
  std::int32_t episodes = 32;
  std::vector<std::uint64_t> map_seeds{1, 2, 3, 4};
  EnvConfig env;
  std::vector<TaskSpec> tasks;
  TrialMode trial_mode = TrialMode::RoundRobin;
  std::uint64_t master_seed = 0;
  std::int32_t jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct PvpConfig {
  std::int32_t num_groups = 9;
  std::int32_t group_size = 14;
  std::int32_t filler_agents = 2;
  std::int32_t maps = 256;
  std::int32_t episodes = 200;
  std::int32_t rounds = 9;
  EnvConfig env;
  std::vector<TaskSpec> tasks;
  std::uint64_t master_seed = 0;
  std::int32_t jobs = 1;

  /// Throws ConfigError, e.g. when num_groups*group_size + filler_agents
  /// differs from env.num_agents.
  void validate() const;
  std::int64_t total_episodes() const noexcept { return static_cast<std::int64_t>(episodes) * rounds; }
};

struct TaskStats {
  std::string name;
  std::string predicate;
  std::int64_t trials = 0;
  std::int64_t completions = 0;
  double progress_sum = 0.0;

  double mean_progress() const noexcept { return trials ? progress_sum / static_cast<double>(trials) : 0.0; }
};

struct PolicyStats {
  std::string policy;
  std::int64_t trials = 0;
  std::int64_t completions = 0;
  double progress_sum = 0.0;
  double lifespan_sum = 0.0;
  std::vector<TaskStats> per_task;

  /// Percentages in [0, 100].
  double completion_rate() const;
  double mean_progress() const;
  double mean_lifespan() const noexcept { return trials ? lifespan_sum / static_cast<double>(trials) : 0.0; }
};

struct ScoreReport {
  std::string mode;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::int64_t episodes = 0;
  /// Final state hash of every episode, in (round, episode) order.
  std::vector<std::uint64_t> episode_hashes;
  /// Aggregated over every scored agent.
  std::vector<TaskStats> per_task;
  /// PvE: one entry. PvP: one entry per group slot, ranked.
  std::vector<PolicyStats> per_policy;
  /// Filler agents, reported but never scored. PvP only.
  std::optional<PolicyStats> baseline;
  /// weighted_category_score of per_task under default_categories.
  double weighted_score = 0.0;
};

/// 100 * completions / trials over all tasks. Throws ConfigError when there
/// are no trials.
double completion_rate(const ScoreReport& r);
/// 100 * mean partial-credit progress over all trials.
double mean_progress(const ScoreReport& r);
double mean_lifespan(const ScoreReport& r);

/// Runs episodes in parallel on `config.jobs` threads; the result never
/// depends on the thread count.
ScoreReport run_pve(const std::string& policy, const PveConfig& config);

/// `policies[g]` names the policy for group slot g. Each round re-draws the
/// slot-to-group mapping from the round seed. Episodes come in sets of
/// num_groups that share a seed and map and rotate every group through every
/// spawn block, with tasks tied to the block, so identical policies score
/// identically when episodes is a multiple of num_groups.
ScoreReport run_pvp(const std::vector<std::string>& policies, const std::string& baseline, const PvpConfig& config);

/// Orders per_policy by completion rate, then mean progress, then mean
/// lifespan, all descending.
void rank_policies(std::vector<PolicyStats>& stats);

/// Sums stats of entries sharing a policy name, keeping first-seen order.
std::vector<PolicyStats> merge_by_policy(const std::vector<PolicyStats>& stats);

/// Spearman correlation with average ranks for ties. Throws ConfigError for
/// fewer than 2 values or unequal lengths; returns 0 for a constant input.
double spearman(std::span<const double> a, std::span<const double> b);

/// Spearman between mean lifespan and completion rate across policies.
/// Throws ConfigError for fewer than 3 entries.
double lifespan_rank_correlation(const std::vector<PolicyStats>& policies);

enum class Category : std::uint8_t { Survival, Combat, Exploration, Skill, Item, Market };
std::string_view to_string(Category c);
Category default_category(const Predicate& p);
std::map<std::string, Category> default_categories(const std::vector<TaskSpec>& tasks);

/// Sum over present categories of (100 / |C|) * mean progress of the
/// category, where tasks weigh equally inside a category. Throws ConfigError
/// for a task missing from the map.
double weighted_category_score(const std::vector<TaskStats>& per_task, const std::map<std::string, Category>& categories);

nlohmann::json to_json(const ScoreReport& r);

}  // namespace arena
