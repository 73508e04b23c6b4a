#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "arena/curriculum.hpp"
#include "arena/episode.hpp"
#include "arena/json_io.hpp"
#include "arena/policy.hpp"
#include "arena/replay.hpp"
#include "arena/run_config.hpp"
#include "arena/tournament.hpp"
#include "fixtures.hpp"

namespace arena {
namespace {

using testing::small_env;

TEST(Trials, RoundRobinArithmetic) {
  const auto pve = trials_per_task(32 * 128, 63);
  EXPECT_EQ(pve.front(), 66);
  EXPECT_EQ(pve.back(), 65);
  EXPECT_EQ(std::count(pve.begin(), pve.end(), 65), 63 - (32 * 128) % 63);
  EXPECT_EQ(trials_per_task(200 * 14, 63).back(), 44);
  EXPECT_EQ(trials_per_task(12, 4), (std::vector<std::int64_t>{3, 3, 3, 3}));
  EXPECT_THROW(trials_per_task(3, 4), ConfigError);
  EXPECT_THROW(trials_per_task(3, 0), ConfigError);
}

TEST(Spearman, ReferenceValues) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{1, 3, 2, 4}), 0.8);
  EXPECT_DOUBLE_EQ(spearman(a, a), 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{5, 5, 5, 5}), 0.0);
  // ties take the average rank
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 2, 3}, a), 0.9486832980505138, 1e-12);
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
  EXPECT_THROW(spearman(a, std::vector<double>{1, 2}), ConfigError);
}

TEST(Categories, DefaultMapping) {
  EXPECT_EQ(default_category(parse_predicate("TickGE(target=5)")), Category::Survival);
  EXPECT_EQ(default_category(parse_predicate("DefeatEntity(n=1)")), Category::Combat);
  EXPECT_EQ(default_category(parse_predicate("CountEvent(event=PlayerKill, n=1)")), Category::Combat);
  EXPECT_EQ(default_category(parse_predicate("CountEvent(event=BuyItem, n=1)")), Category::Market);
  EXPECT_EQ(default_category(parse_predicate("HarvestItem(item=Ration, n=1)")), Category::Item);
  EXPECT_EQ(default_category(parse_predicate("OccupyTile(row=1, col=1)")), Category::Exploration);
}

TEST(Categories, WeightedScore) {
  std::vector<TaskStats> stats{{"a", "", 10, 0, 10.0}, {"b", "", 10, 0, 0.0}, {"c", "", 4, 0, 2.0}};
  const std::map<std::string, Category> cats{{"a", Category::Survival}, {"b", Category::Survival}, {"c", Category::Combat}};
  // survival: mean(1, 0) = 0.5, combat 0.5; each category worth 50
  EXPECT_DOUBLE_EQ(weighted_category_score(stats, cats), 50.0);
  stats[1].progress_sum = 10.0;
  EXPECT_DOUBLE_EQ(weighted_category_score(stats, cats), 75.0);
  EXPECT_THROW(weighted_category_score(stats, {{"a", Category::Survival}}), ConfigError);
}

TEST(Ranking, OrderAndMerge) {
  std::vector<PolicyStats> s(3);
  s[0] = {"x", 10, 1, 5.0, 100.0, {}};
  s[1] = {"y", 10, 3, 5.0, 100.0, {}};
  s[2] = {"x", 10, 1, 6.0, 100.0, {}};
  rank_policies(s);
  EXPECT_EQ(s[0].policy, "y");
  EXPECT_EQ(s[1].progress_sum, 6.0);
  const auto m = merge_by_policy(s);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].policy, "x");
  EXPECT_EQ(m[1].trials, 20);
  EXPECT_DOUBLE_EQ(m[1].completion_rate(), 10.0);
}

std::vector<TaskSpec> few_tasks() {
  return parse_task_file(
             "t: TickGE(target=20)\n"
             "k: DefeatEntity(n=1)\n"
             "d: CountEvent(event=DrinkWater, n=2)\n")
      .tasks();
}

PveConfig small_pve() {
  PveConfig c;
  c.env = small_env(6);
  c.env.max_ticks = 40;
  c.env.num_npcs = 4;
  c.episodes = 3;
  c.map_seeds = {5, 6};
  c.tasks = few_tasks();
  c.master_seed = 11;
  return c;
}

PvpConfig small_pvp() {
  PvpConfig c;
  c.num_groups = 3;
  c.group_size = 2;
  c.filler_agents = 2;
  c.env = small_env(8);
  c.env.max_ticks = 30;
  c.maps = 2;
  c.episodes = 3;
  c.rounds = 2;
  c.tasks = few_tasks();
  c.master_seed = 4;
  return c;
}

TEST(Pve, RunsAndIsThreadInvariant) {
  PveConfig c = small_pve();
  const ScoreReport one = run_pve("forage", c);
  c.jobs = 3;
  const ScoreReport three = run_pve("forage", c);
  EXPECT_EQ(to_json(one).dump(), to_json(three).dump());
  EXPECT_EQ(one.episodes, 3);
  EXPECT_EQ(one.episode_hashes.size(), 3u);
  std::int64_t trials = 0;
  for (const auto& t : one.per_task) trials += t.trials;
  EXPECT_EQ(trials, 18);
  EXPECT_EQ(one.per_task[0].trials, 6);
  EXPECT_GE(completion_rate(one), 0.0);
  EXPECT_LE(completion_rate(one), 100.0);
}

TEST(Pve, ValidationErrors) {
  PveConfig c = small_pve();
  c.tasks.clear();
  EXPECT_THROW(run_pve("forage", c), ConfigError);
  c = small_pve();
  c.map_seeds.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_pve();
  EXPECT_THROW(run_pve("sleepy", c), ConfigError);
}

TEST(Pvp, StructureValidation) {
  PvpConfig c;
  c.env.num_agents = 128;
  c.tasks = few_tasks();
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.num_groups * c.group_size + c.filler_agents, 128);
  EXPECT_EQ(c.total_episodes(), 1800);
  c.filler_agents = 3;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Pvp, IdenticalPoliciesScoreIdentically) {
  const PvpConfig c = small_pvp();
  const ScoreReport r = run_pvp({"forage", "forage", "forage"}, "random", c);
  ASSERT_EQ(r.per_policy.size(), 3u);
  for (const auto& p : r.per_policy) {
    EXPECT_EQ(p.trials, r.per_policy[0].trials);
    EXPECT_EQ(p.completions, r.per_policy[0].completions);
    EXPECT_DOUBLE_EQ(p.progress_sum, r.per_policy[0].progress_sum);
  }
  ASSERT_TRUE(r.baseline.has_value());
  EXPECT_EQ(r.baseline->trials, 2 * 6);
  EXPECT_EQ(r.episode_hashes.size(), 6u);
}

TEST(Pvp, ThreadInvariantAndSlotCount) {
  PvpConfig c = small_pvp();
  const auto a = to_json(run_pvp({"forage", "warrior", "random"}, "random", c)).dump();
  c.jobs = 4;
  EXPECT_EQ(a, to_json(run_pvp({"forage", "warrior", "random"}, "random", c)).dump());
  EXPECT_THROW(run_pvp({"forage"}, "random", c), ConfigError);
}

TEST(Policies, FactoryAndNames) {
  for (const auto& n : policy_names()) EXPECT_EQ(make_policy(n)->name(), n);
  EXPECT_THROW(make_policy("oracle"), ConfigError);
}

TEST(Policies, DeadAgentsGetNoop) {
  World w = testing::duel_world();
  auto obs = w.observe_all();
  obs[1] = Observation{};
  std::vector<Rng> rngs{Rng(1), Rng(2)};
  auto p = make_policy("random");
  for (int i = 0; i < 20; ++i) {
    const auto acts = act_batch(*p, obs, rngs);
    EXPECT_TRUE(std::holds_alternative<act::Noop>(acts[1]));
  }
}

World rival_world(const EnvConfig& c) {
  const std::vector<std::int32_t> groups{0, 1};
  World w = World::reset(c, testing::flat_map(), testing::tick_tasks(2), 1, groups).world;
  w.place_agent(0, {8, 7});
  w.place_agent(1, {8, 8});
  return w;
}

TEST(Policies, WarriorSkipsImmuneTarget) {
  EnvConfig c = small_env(2);
  c.spawn_immunity_ticks = 50;
  World w = rival_world(c);
  WarriorPolicy warrior;
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Action a = warrior.act(w.observe(0), rng);
    EXPECT_FALSE(std::holds_alternative<act::Attack>(a)) << describe(a);
  }
}

TEST(Policies, WarriorAttacksAdjacentTarget) {
  World w = rival_world(small_env(2));
  WarriorPolicy warrior;
  Rng rng(3);
  const Action a = warrior.act(w.observe(0), rng);
  ASSERT_TRUE(std::holds_alternative<act::Attack>(a)) << describe(a);
  // agent 1 fights Ranged by default; Melee beats it
  EXPECT_EQ(std::get<act::Attack>(a).style, CombatStyle::Melee);
}

TEST(Episode, DeterministicAndSpecChecked) {
  EnvConfig env = small_env(6);
  env.num_npcs = 3;
  const auto spec = simulate_spec(env, few_tasks(), 9, 50, "warrior");
  const auto a = run_episode(spec);
  const auto b = run_episode(spec);
  EXPECT_EQ(a.final_hash, b.final_hash);
  EXPECT_EQ(a.ticks, 50);
  EXPECT_EQ(a.agents.size(), 6u);
  EXPECT_NE(run_episode(simulate_spec(env, few_tasks(), 10, 50, "warrior")).final_hash, a.final_hash);
  auto broken = spec;
  broken.tasks.pop_back();
  EXPECT_THROW(run_episode(broken), ConfigError);
  EXPECT_THROW(simulate_spec(env, few_tasks(), 9, 0, "warrior"), ConfigError);
}

TEST(Episode, RewardsAndRollout) {
  EnvConfig env = small_env(4);
  const auto spec = simulate_spec(env, few_tasks(), 2, 30, "forage");
  EpisodeOptions o;
  o.rewards = reward_preset("default");
  o.collect_rollout = true;
  o.keep_trace = true;
  const auto r = run_episode(spec, o);
  ASSERT_TRUE(r.batch.has_value());
  EXPECT_EQ(static_cast<std::int64_t>(r.batch->size()), r.agent_steps);
  EXPECT_EQ(r.batch->transitions(), padded_oracle(r.trace, 4, 30).compacted());
}

TEST(Episode, ReplayLines) {
  EnvConfig env = small_env(3);
  env.num_npcs = 2;
  std::stringstream replay;
  EpisodeOptions o;
  o.replay = &replay;
  const auto r = run_episode(simulate_spec(env, few_tasks(), 5, 12, "random"), o);
  std::string line;
  std::vector<nlohmann::json> lines;
  while (std::getline(replay, line)) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 13u);
  EXPECT_EQ(lines[0]["type"], "header");
  EXPECT_EQ(lines[0]["tasks"].size(), 3u);
  EXPECT_EQ(lines[12]["tick"], 12);
  EXPECT_EQ(lines[12]["agents"].size(), 3u);
  EXPECT_EQ(lines[12]["npcs"].size(), 2u);
  EXPECT_EQ(hash_hex(r.final_hash).size(), 16u);
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}

TEST(Config, JsonOverlayAndUnknownKeys) {
  const EnvConfig e = env_config_from_json({{"num_agents", 16}, {"map_size", 32}});
  EXPECT_EQ(e.num_agents, 16);
  EXPECT_EQ(e.max_ticks, EnvConfig{}.max_ticks);
  EXPECT_THROW(env_config_from_json({{"num_agentz", 16}}), ConfigError);
  EXPECT_THROW(env_config_from_json({{"num_agents", "many"}}), ConfigError);
  const RewardConfig r = reward_config_from_json({{"preset", "yaofeng"}, {"clip", 2.0}});
  EXPECT_EQ(r.gold_delta_coef, reward_preset("yaofeng").gold_delta_coef);
  EXPECT_EQ(r.clip, 2.0);
  EXPECT_THROW(reward_config_from_json({{"preset", "nope"}}), ConfigError);
  EXPECT_EQ(env_config_from_json(to_json(e)).map_size, 32);
}

TEST(Config, RunConfigParsing) {
  const RunConfig c = run_config_from_json({{"master_seed", 5}, {"tasks", {{"eval", "x.tasks"}}}}, "/base");
  EXPECT_EQ(c.master_seed, 5u);
  EXPECT_EQ(c.eval_tasks, std::filesystem::path("/base/x.tasks"));
  EXPECT_THROW(run_config_from_json({{"tournament", {{"ponies", 1}}}}), ConfigError);
  EXPECT_THROW(run_config_from_json({{"master_seed", -1}}), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, BundledPresetsLoad) {
  const auto dir = std::filesystem::path(ARENA_DATA_DIR).parent_path() / "configs" / "presets";
  for (const auto& name : reward_preset_names()) {
    const RunConfig c = load_run_config(dir / (name + ".json"));
    EXPECT_EQ(c.rewards, reward_preset(name));
    EXPECT_EQ(load_task_file(c.eval_tasks.string()).size(), 12u);
  }
}

}  // namespace
}  // namespace arena
