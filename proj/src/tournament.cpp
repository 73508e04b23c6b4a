#include "arena/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "arena/episode.hpp"
#include "arena/replay.hpp"
#include "arena/rng.hpp"

namespace arena {
namespace {

constexpr std::uint64_t kPveSalt = 0x707665;
constexpr std::uint64_t kPermSalt = 0x7065726d;
constexpr std::uint64_t kSampleSalt = 0x73616d70;
constexpr std::uint64_t kMapSalt = 0x6d6170;
constexpr std::uint64_t kRoundSalt = 0x726f756e64;

// Runs job(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure by index.
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, std::int32_t jobs, F job) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<TaskStats> empty_task_stats(const std::vector<TaskSpec>& tasks) {
  std::vector<TaskStats> out;
  out.reserve(tasks.size());
  for (const TaskSpec& t : tasks) out.push_back({t.name, t.source_text, 0, 0, 0.0});
  return out;
}

void record(PolicyStats& p, std::vector<TaskStats>* report_tasks, std::size_t task, const AgentOutcome& o) {
  ++p.trials;
  p.completions += o.completed ? 1 : 0;
  p.progress_sum += o.progress;
  p.lifespan_sum += o.lifespan;
  TaskStats& t = p.per_task[task];
  ++t.trials;
  t.completions += o.completed ? 1 : 0;
  t.progress_sum += o.progress;
  if (report_tasks) {
    TaskStats& r = (*report_tasks)[task];
    ++r.trials;
    r.completions += o.completed ? 1 : 0;
    r.progress_sum += o.progress;
  }
}

void validate_tasks(const std::vector<TaskSpec>& tasks) {
  if (tasks.empty()) throw ConfigError("evaluation task list is empty");
}

void finalize(ScoreReport& r, const std::vector<TaskSpec>& tasks) {
  std::map<std::string, Category> cats;
  for (const TaskSpec& t : tasks) cats.emplace(t.name, default_category(t.predicate));
  r.weighted_score = weighted_category_score(r.per_task, cats);
}

}  // namespace

std::vector<std::int64_t> trials_per_task(std::int64_t slots, std::int64_t num_tasks) {
  if (num_tasks < 1) throw ConfigError("need at least one task");
  if (slots < num_tasks) {
    throw ConfigError(std::to_string(slots) + " trial slots cannot cover " + std::to_string(num_tasks) + " tasks");
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(num_tasks), slots / num_tasks);
  for (std::int64_t i = 0; i < slots % num_tasks; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

void PveConfig::validate() const {
  env.validate();
  validate_tasks(tasks);
  if (episodes < 1) throw ConfigError("pve episodes must be >= 1");
  if (map_seeds.empty()) throw ConfigError("pve needs at least one map seed");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  trials_per_task(static_cast<std::int64_t>(episodes) * env.num_agents, static_cast<std::int64_t>(tasks.size()));
}

void PvpConfig::validate() const {
  env.validate();
  validate_tasks(tasks);
  if (num_groups < 1 || group_size < 1 || filler_agents < 0) throw ConfigError("invalid pvp group layout");
  if (num_groups * group_size + filler_agents != env.num_agents) {
    throw ConfigError("pvp layout " + std::to_string(num_groups) + "*" + std::to_string(group_size) + "+" +
                      std::to_string(filler_agents) + " does not match num_agents " +
                      std::to_string(env.num_agents));
  }
  if (episodes < 1 || rounds < 1 || maps < 1) throw ConfigError("pvp episodes, rounds and maps must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  trials_per_task(static_cast<std::int64_t>(episodes) * group_size, static_cast<std::int64_t>(tasks.size()));
}

double PolicyStats::completion_rate() const {
  if (trials == 0) throw ConfigError("completion rate of zero trials");
  return 100.0 * static_cast<double>(completions) / static_cast<double>(trials);
}

double PolicyStats::mean_progress() const {
  if (trials == 0) throw ConfigError("mean progress of zero trials");
  return 100.0 * progress_sum / static_cast<double>(trials);
}

double completion_rate(const ScoreReport& r) {
  std::int64_t trials = 0;
  std::int64_t completions = 0;
  for (const TaskStats& t : r.per_task) {
    trials += t.trials;
    completions += t.completions;
  }
  if (trials == 0) throw ConfigError("completion rate of zero trials");
  return 100.0 * static_cast<double>(completions) / static_cast<double>(trials);
}

double mean_progress(const ScoreReport& r) {
  std::int64_t trials = 0;
  double progress = 0.0;
  for (const TaskStats& t : r.per_task) {
    trials += t.trials;
    progress += t.progress_sum;
  }
  if (trials == 0) throw ConfigError("mean progress of zero trials");
  return 100.0 * progress / static_cast<double>(trials);
}

double mean_lifespan(const ScoreReport& r) {
  std::int64_t trials = 0;
  double life = 0.0;
  for (const PolicyStats& p : r.per_policy) {
    trials += p.trials;
    life += p.lifespan_sum;
  }
  return trials ? life / static_cast<double>(trials) : 0.0;
}

ScoreReport run_pve(const std::string& policy, const PveConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.env.num_agents);
  const auto num_tasks = config.tasks.size();
  const auto episodes = static_cast<std::size_t>(config.episodes);

  // task index per (episode, agent)
  std::vector<std::vector<std::size_t>> task_of(episodes, std::vector<std::size_t>(n));
  for (std::size_t e = 0; e < episodes; ++e) {
    if (config.trial_mode == TrialMode::RoundRobin) {
      for (std::size_t i = 0; i < n; ++i) task_of[e][i] = (e * n + i) % num_tasks;
      Rng perm(hash_combine(config.master_seed, kPermSalt, e));
      for (std::size_t i = n; i > 1; --i) std::swap(task_of[e][i - 1], task_of[e][perm.below(i)]);
    } else {
      Rng draw(hash_combine(config.master_seed, kSampleSalt, e));
      for (std::size_t i = 0; i < n; ++i) task_of[e][i] = draw.below(num_tasks);
    }
  }

  ScoreReport report;
  report.mode = "pve";
  report.master_seed = config.master_seed;
  report.episodes = config.episodes;
  std::vector<EpisodeSpec> specs(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeSpec& s = specs[e];
    s.env = config.env;
    s.map_seed = config.map_seeds[e % config.map_seeds.size()];
    s.seed = hash_combine(config.master_seed, kPveSalt, e);
    s.policies = {policy};
    for (std::size_t i = 0; i < n; ++i) s.tasks.push_back(config.tasks[task_of[e][i]]);
    report.seeds.push_back(s.seed);
  }

  const auto results =
      parallel_map<EpisodeResult>(episodes, config.jobs, [&](std::size_t e) { return run_episode(specs[e]); });

  PolicyStats stats;
  stats.policy = policy;
  stats.per_task = empty_task_stats(config.tasks);
  report.per_task = empty_task_stats(config.tasks);
  for (std::size_t e = 0; e < episodes; ++e) {
    for (std::size_t i = 0; i < n; ++i) record(stats, &report.per_task, task_of[e][i], results[e].agents[i]);
    report.episode_hashes.push_back(results[e].final_hash);
  }
  report.per_policy.push_back(std::move(stats));
  finalize(report, config.tasks);
  return report;
}

ScoreReport run_pvp(const std::vector<std::string>& policies, const std::string& baseline, const PvpConfig& config) {
  config.validate();
  if (static_cast<std::int32_t>(policies.size()) != config.num_groups) {
    throw ConfigError("pvp needs " + std::to_string(config.num_groups) + " policies, got " +
                      std::to_string(policies.size()));
  }
  const auto groups = static_cast<std::size_t>(config.num_groups);
  const auto gsize = static_cast<std::size_t>(config.group_size);
  const auto n = static_cast<std::size_t>(config.env.num_agents);
  const auto scored = groups * gsize;
  const auto num_tasks = config.tasks.size();
  const auto episodes = static_cast<std::size_t>(config.episodes);
  const auto rounds = static_cast<std::size_t>(config.rounds);
  const std::size_t sets_per_round = (episodes + groups - 1) / groups;

  std::vector<std::uint64_t> maps(static_cast<std::size_t>(config.maps));
  for (std::size_t i = 0; i < maps.size(); ++i) maps[i] = hash_combine(config.master_seed, kMapSalt, i);

  struct Plan {
    EpisodeSpec spec;
    std::vector<std::size_t> task;
    // policy slot per agent; `groups` marks a filler
    std::vector<std::size_t> slot;
  };
  std::vector<Plan> plans(rounds * episodes);
  ScoreReport report;
  report.mode = "pvp";
  report.master_seed = config.master_seed;
  report.episodes = static_cast<std::int64_t>(rounds * episodes);

  for (std::size_t r = 0; r < rounds; ++r) {
    const std::uint64_t round_seed = hash_combine(config.master_seed, kRoundSalt, r);
    std::vector<std::size_t> perm(groups);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng shuffle(round_seed);
    for (std::size_t i = groups; i > 1; --i) std::swap(perm[i - 1], perm[shuffle.below(i)]);

    for (std::size_t e = 0; e < episodes; ++e) {
      const std::size_t set = e / groups;
      const std::size_t rot = e % groups;
      Plan& p = plans[r * episodes + e];
      EpisodeSpec& s = p.spec;
      s.env = config.env;
      s.seed = hash_combine(round_seed, set);
      s.map_seed = maps[(r * sets_per_round + set) % maps.size()];
      for (std::size_t g = 0; g < groups; ++g) s.policies.push_back(policies[perm[g]]);
      s.policies.push_back(baseline);
      s.tasks.resize(n);
      s.groups.resize(n);
      s.controller.resize(n);
      p.task.resize(n);
      p.slot.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t g;
        std::size_t counter;
        if (i < scored) {
          const std::size_t block = i / gsize;
          g = (block + groups - rot) % groups;
          counter = set * scored + i;
          p.slot[i] = perm[g];
        } else {
          g = groups;
          counter = set * (n - scored) + (i - scored);
          p.slot[i] = groups;
        }
        p.task[i] = counter % num_tasks;
        s.tasks[i] = config.tasks[p.task[i]];
        s.groups[i] = static_cast<std::int32_t>(g);
        s.controller[i] = static_cast<std::int32_t>(g);
      }
      if (e % groups == 0) report.seeds.push_back(s.seed);
    }
  }

  const auto results = parallel_map<EpisodeResult>(plans.size(), config.jobs,
                                                   [&](std::size_t k) { return run_episode(plans[k].spec); });

  std::vector<PolicyStats> slots(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    slots[g].policy = policies[g];
    slots[g].per_task = empty_task_stats(config.tasks);
  }
  PolicyStats fill;
  fill.policy = baseline;
  fill.per_task = empty_task_stats(config.tasks);
  report.per_task = empty_task_stats(config.tasks);
  for (std::size_t k = 0; k < plans.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t slot = plans[k].slot[i];
      if (slot == groups) {
        record(fill, nullptr, plans[k].task[i], results[k].agents[i]);
      } else {
        record(slots[slot], &report.per_task, plans[k].task[i], results[k].agents[i]);
      }
    }
    report.episode_hashes.push_back(results[k].final_hash);
  }
  rank_policies(slots);
  report.per_policy = std::move(slots);
  if (fill.trials > 0) report.baseline = std::move(fill);
  finalize(report, config.tasks);
  return report;
}

void rank_policies(std::vector<PolicyStats>& stats) {
  std::stable_sort(stats.begin(), stats.end(), [](const PolicyStats& a, const PolicyStats& b) {
    const double ca = a.trials ? a.completion_rate() : 0.0;
    const double cb = b.trials ? b.completion_rate() : 0.0;
    if (ca != cb) return ca > cb;
    const double pa = a.trials ? a.mean_progress() : 0.0;
    const double pb = b.trials ? b.mean_progress() : 0.0;
    if (pa != pb) return pa > pb;
    return a.mean_lifespan() > b.mean_lifespan();
  });
}

std::vector<PolicyStats> merge_by_policy(const std::vector<PolicyStats>& stats) {
  std::vector<PolicyStats> out;
  for (const PolicyStats& s : stats) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PolicyStats& o) { return o.policy == s.policy; });
    if (it == out.end()) {
      out.push_back(s);
      continue;
    }
    it->trials += s.trials;
    it->completions += s.completions;
    it->progress_sum += s.progress_sum;
    it->lifespan_sum += s.lifespan_sum;
    for (std::size_t t = 0; t < it->per_task.size() && t < s.per_task.size(); ++t) {
      it->per_task[t].trials += s.per_task[t].trials;
      it->per_task[t].completions += s.per_task[t].completions;
      it->per_task[t].progress_sum += s.per_task[t].progress_sum;
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("spearman inputs differ in length");
  if (a.size() < 2) throw ConfigError("spearman needs at least 2 values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = (static_cast<double>(a.size()) + 1.0) / 2.0;
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

double lifespan_rank_correlation(const std::vector<PolicyStats>& policies) {
  if (policies.size() < 3) throw ConfigError("lifespan rank correlation needs at least 3 policies");
  std::vector<double> life;
  std::vector<double> rate;
  for (const PolicyStats& p : policies) {
    life.push_back(p.mean_lifespan());
    rate.push_back(p.completion_rate());
  }
  return spearman(life, rate);
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Survival: return "survival";
    case Category::Combat: return "combat";
    case Category::Exploration: return "exploration";
    case Category::Skill: return "skill";
    case Category::Item: return "item";
    case Category::Market: return "market";
  }
  return "survival";
}

Category default_category(const Predicate& p) {
  switch (p.kind) {
    case PredicateKind::TickGE: return Category::Survival;
    case PredicateKind::DefeatEntity: return Category::Combat;
    case PredicateKind::OccupyTile: return Category::Exploration;
    case PredicateKind::AttainSkill: return Category::Skill;
    case PredicateKind::EquipItem:
    case PredicateKind::OwnItem:
    case PredicateKind::HarvestItem: return Category::Item;
    case PredicateKind::EarnGold:
    case PredicateKind::HoardGold: return Category::Market;
    case PredicateKind::CountEvent:
      switch (static_cast<EventKind>(p.args.at(0))) {
        case EventKind::EatFood:
        case EventKind::DrinkWater: return Category::Survival;
        case EventKind::ScoreHit:
        case EventKind::PlayerKill: return Category::Combat;
        case EventKind::ConsumeItem:
        case EventKind::HarvestItem:
        case EventKind::EquipItem: return Category::Item;
        case EventKind::ListItem:
        case EventKind::BuyItem:
        case EventKind::EarnGold: return Category::Market;
        case EventKind::LevelUp: return Category::Skill;
      }
  }
  return Category::Survival;
}

std::map<std::string, Category> default_categories(const std::vector<TaskSpec>& tasks) {
  std::map<std::string, Category> out;
  for (const TaskSpec& t : tasks) out.emplace(t.name, default_category(t.predicate));
  return out;
}

double weighted_category_score(const std::vector<TaskStats>& per_task,
                               const std::map<std::string, Category>& categories) {
  std::map<Category, std::pair<double, std::int64_t>> acc;
  for (const TaskStats& t : per_task) {
    const auto it = categories.find(t.name);
    if (it == categories.end()) throw ConfigError("task '" + t.name + "' has no category");
    auto& [sum, count] = acc[it->second];
    sum += t.mean_progress();
    ++count;
  }
  if (acc.empty()) return 0.0;
  double score = 0.0;
  const double weight = 100.0 / static_cast<double>(acc.size());
  for (const auto& [cat, sc] : acc) score += weight * sc.first / static_cast<double>(sc.second);
  return score;
}

namespace {

nlohmann::json task_json(const TaskStats& t) {
  return {{"name", t.name},
          {"predicate", t.predicate},
          {"trials", t.trials},
          {"completions", t.completions},
          {"mean_progress", t.mean_progress()}};
}

nlohmann::json policy_json(const PolicyStats& p) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskStats& t : p.per_task) tasks.push_back(task_json(t));
  return {{"policy", p.policy},
          {"trials", p.trials},
          {"completions", p.completions},
          {"completion_rate", p.trials ? p.completion_rate() : 0.0},
          {"mean_progress", p.trials ? p.mean_progress() : 0.0},
          {"mean_lifespan", p.mean_lifespan()},
          {"per_task", tasks}};
}

}  // namespace

nlohmann::json to_json(const ScoreReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["master_seed"] = r.master_seed;
  j["seeds"] = r.seeds;
  j["episodes"] = r.episodes;
  auto& hashes = j["episode_hashes"] = nlohmann::json::array();
  for (std::uint64_t h : r.episode_hashes) hashes.push_back(hash_hex(h));
  auto& tasks = j["per_task"] = nlohmann::json::array();
  for (const TaskStats& t : r.per_task) tasks.push_back(task_json(t));
  auto& pols = j["per_policy"] = nlohmann::json::array();
  for (const PolicyStats& p : r.per_policy) pols.push_back(policy_json(p));
  if (r.baseline) j["baseline"] = policy_json(*r.baseline);
  j["completion_rate"] = completion_rate(r);
  j["mean_progress"] = mean_progress(r);
  j["weighted_score"] = r.weighted_score;
  j["mean_lifespan"] = mean_lifespan(r);
  return j;
}

}  // namespace arena
