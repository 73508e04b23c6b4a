#include "arena/reward.hpp"

#include <algorithm>
#include <cmath>

#include "arena/world.hpp"

namespace arena {

void RewardConfig::validate() const {
  const double coefs[] = {task_progress_coef, completion_bonus, hp_delta_coef,   health_recovery_bonus,
                          event_bonus_per_new_event_type, gold_delta_coef, defense_coef, attack_coef,
                          experience_coef, death_penalty};
  for (double c : coefs) {
    if (!std::isfinite(c)) throw ConfigError("reward coefficients must be finite");
  }
  if (!std::isfinite(clip) || clip <= 0.0) throw ConfigError("reward clip must be positive");
}

RewardConfig reward_preset(std::string_view name) {
  RewardConfig c;
  if (name == "default") return c;
  if (name == "takeru") {
    // exploration via first-occurrence event bonus on top of the task reward
    c.hp_delta_coef = 0.0;
    c.health_recovery_bonus = 0.0;
    c.event_bonus_per_new_event_type = 0.5;
    return c;
  }
  if (name == "yaofeng") {
    c.event_bonus_per_new_event_type = 0.0;
    c.health_recovery_bonus = 0.0;
    c.hp_delta_coef = 0.005;
    c.gold_delta_coef = 0.01;
    c.defense_coef = 0.01;
    c.attack_coef = 0.005;
    c.experience_coef = 0.001;
    return c;
  }
  if (name == "mori") {
    // death_penalty > 0 here is a survival-independent bonus at death
    c.completion_bonus = 3.0;
    c.hp_delta_coef = 0.005;
    c.health_recovery_bonus = 0.02;
    c.event_bonus_per_new_event_type = 0.5;
    c.death_penalty = 0.02;
    return c;
  }
  throw ConfigError("unknown reward preset '" + std::string(name) + "'");
}

std::vector<std::string> reward_preset_names() { return {"default", "takeru", "yaofeng", "mori"}; }

double shaped_reward(const RewardConfig& c, const TickDelta& d) {
  double r = c.task_progress_coef * d.progress;
  if (d.completed_now) r += c.completion_bonus;
  r += c.hp_delta_coef * d.hp;
  if (d.recovered) r += c.health_recovery_bonus;
  r += c.event_bonus_per_new_event_type * d.new_event_types;
  r += c.gold_delta_coef * d.gold;
  r += c.defense_coef * d.defense;
  r += c.experience_coef * d.max_xp;
  r += c.attack_coef * d.damage_dealt;
  if (d.died) r += c.death_penalty;
  return std::clamp(r, -c.clip, c.clip);
}

RewardTracker::Snapshot RewardTracker::take(const World& world, AgentId id) {
  const AgentState& a = world.agent(id);
  const TaskAssignment& t = world.assignments()[static_cast<std::size_t>(id)];
  return {static_cast<double>(a.health),
          static_cast<double>(a.gold),
          static_cast<double>(world.defense(a)),
          static_cast<double>(a.skills.max_xp()),
          static_cast<double>(a.damage_dealt),
          t.progress,
          t.completed,
          a.alive};
}

RewardTracker::RewardTracker(const World& world) : seen_(world.agents().size()) {
  last_.reserve(world.agents().size());
  for (const AgentState& a : world.agents()) last_.push_back(take(world, a.id));
}

std::vector<TickDelta> RewardTracker::update(const World& world, const std::vector<GameEvent>& events) {
  const std::size_t n = last_.size();
  std::vector<TickDelta> out(n);
  for (const GameEvent& e : events) {
    auto& seen = seen_[static_cast<std::size_t>(e.agent_id)];
    const auto k = static_cast<std::size_t>(e.kind);
    if (!seen.test(k)) {
      seen.set(k);
      ++out[static_cast<std::size_t>(e.agent_id)].new_event_types;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<AgentId>(i);
    const Snapshot now = take(world, id);
    const Snapshot& was = last_[i];
    TickDelta& d = out[i];
    d.hp = now.hp - was.hp;
    d.recovered = now.alive && world.recovered_last_tick(id);
    d.gold = now.gold - was.gold;
    d.defense = now.defense - was.defense;
    d.max_xp = now.max_xp - was.max_xp;
    d.damage_dealt = now.damage - was.damage;
    d.progress = now.progress - was.progress;
    d.completed_now = now.completed && !was.completed;
    d.died = was.alive && !now.alive;
    last_[i] = now;
  }
  return out;
}

}  // namespace arena
